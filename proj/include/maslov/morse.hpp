#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maslov/iteration.hpp"

namespace maslov {

// One closed geodesic as the accounting layer sees it: its index seed, the
// number of distinct geodesics sharing that data (lifts), optional metric
// data, and the local-module dimension rows for its degenerate iterates.
// k_table maps an iterate m inside one analytic period to the row
// (k_0, ..., k_nu) of local homology dimensions at that iterate.
struct GeodesicRecord {
  std::string name;
  IndexSeed seed;
  long lifts = 1;
  std::optional<double> length;
  std::optional<double> energy;
  std::map<long, std::vector<long>> k_table;

  // Throws std::invalid_argument on bad multiplicities, metric mismatch
  // (length vs sqrt(2*energy)), or a local-module row that breaks the
  // exclusion rules: the end entries are 0/1-valued, a 1 at either end
  // forces the rest of the row to vanish, and an interior nonzero forces
  // both ends to vanish. Rows are only accepted at degenerate iterates
  // inside one analytic period.
  void validate() const;

  // Length from the stored value or sqrt(2*energy); throws
  // "insufficient data" when neither field is present.
  double geometric_length() const;
};

// A period T with nu(c^{p+T}) = nu(c^p), index shifts even over T, and the
// local rows repeating. Assembled from the rational angle denominators,
// doubled for eigenvalue -1 content and, when needed, for index parity.
long analytic_period(const IndexSeed& s);

// Loop-space Betti number b_q of the sphere of dimension n, read off the
// Poincare series coefficients.
long betti(int n, long q);

// Direct alternating sum of b_q over 0 <= q <= 2N+n-2.
long betti_alternating_sum(int n, long N);

// dim of the degree-q local module of the m-th iterate. Nondegenerate
// iterates contribute 1 exactly at q = i(c^m) when i(c^m)-i(c) is even;
// degenerate ones read their row from k_table modulo the analytic period.
// Throws "insufficient data" for a degenerate iterate with no row.
long critical_module_dims(const GeodesicRecord& rec, long m, long q);

// Alternating sum of the local-module dimensions at the m-th iterate.
long euler_chi(const GeodesicRecord& rec, long m);

// Average of euler_chi over one analytic period, exact.
Rational average_chi(const GeodesicRecord& rec);

// Sum of lifts * average_chi / mean_index over the records, minus the
// dimension constant -n/(2n-2) (n even) or (n+1)/(2n-2) (n odd). A zero
// residual is the identity holding exactly. Requires exact angle data and
// positive mean indices.
QuadraticNumber mean_index_identity(const std::vector<GeodesicRecord>& recs,
                                    int n);

struct MorseTable {
  std::vector<long> critical;   // M_q, degrees 0..q_max
  std::vector<long> betti_row;  // b_q, same degrees

  long q_max() const { return static_cast<long>(critical.size()) - 1; }
  void validate() const;  // equal nonempty sizes, nonnegative entries
};

// M_q over degrees [0, q_max] from the records, the j-th one iterated
// through 1..m_caps[j], each weighted by its lifts; b_q from betti(n, .).
MorseTable assemble_table(const std::vector<GeodesicRecord>& recs,
                          const std::vector<long>& m_caps, int n, long q_max);

struct MorseCheck {
  bool ok = true;
  long first_violation = -1;  // degree of the first failure, -1 when ok
  std::string detail;
  std::vector<long> pointwise_slack;    // M_q - b_q
  std::vector<long> alternating_slack;  // telescoped lower-bound slack
};

// Pointwise rank inequality and every alternating partial-sum inequality.
// Violations are findings, not errors.
MorseCheck morse_inequality_check(const MorseTable& t);

struct ResonanceReport {
  bool ok = true;
  double common = 0.0;  // shared mean-index-to-length ratio when ok
  std::vector<double> ratios;
  std::string detail;
};

// mean index / length per record; passes when all ratios agree within tol.
ResonanceReport resonance_check(const std::vector<GeodesicRecord>& recs,
                                double tol = 1e-9);

}  // namespace maslov
