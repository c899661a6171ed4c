#pragma once

#include <string>
#include <vector>

#include "maslov/normal_forms.hpp"
#include "maslov/numeric.hpp"

namespace maslov {

// Initial data of the iteration formulae: index and nullity of the first
// iterate plus the block content of the end matrix. The nullity is redundant
// (it equals the eigenvalue-1 kernel dimension determined by the blocks) and
// is checked; the initial index is free data, constrained only by the parity
// diagnostic below.
struct IndexSeed {
  long i1 = 0;
  long nu1 = 0;
  Decomposition d;

  // Throws std::invalid_argument when d is invalid or nu1 does not match it.
  void validate() const;
};

struct IteratedIndex {
  long m = 1;
  long index = 0;
  long nullity = 0;
};

// Index of the m-th iterate. Exact over rational and quadratic angles; a
// floating angle whose iterate lands within 1e-12 of an integer raises a
// "precision breakdown" error, since the rounding maps jump exactly there.
long index_iterate(const IndexSeed& s, long m);

// Nullity of the m-th iterate, same substrate rules.
long nullity_iterate(const IndexSeed& s, long m);

IteratedIndex iterate(const IndexSeed& s, long m);

// Mean index per the closed formula, growth rate of index_iterate / m.
// The exact form requires every rotation angle to be exact and all quadratic
// ratios to share one radicand; it throws std::invalid_argument otherwise.
// The float form is total.
QuadraticNumber mean_index(const IndexSeed& s);
double mean_index_float(const IndexSeed& s);

enum class ParityRequirement { odd, even, any };

struct ParityReport {
  bool ok = false;
  ParityRequirement required = ParityRequirement::any;
  std::string detail;
};

// Parity rule for the initial index of a single-block decomposition (the
// rule is stated per block; composition is not asserted, so composite
// decompositions are refused with std::invalid_argument).
ParityReport parity_check(const IndexSeed& s);

// Two-sided bounds on the index increment i(m+1) - i(m) - i(1): below by
// nu(m) - e/2, above by nu(1) - nu(m+1) + e/2, where e is the total
// algebraic multiplicity of the unit-circle spectrum. Slacks are the
// distances to each bound; the check holds iff both are nonnegative.
struct GapBounds {
  bool holds = false;
  long lower_slack = 0;
  long upper_slack = 0;
};
GapBounds gap_bounds_check(const IndexSeed& s, long m);

// Superlinear growth test used by the two-geodesic argument:
// i(c^m) + nu(c^m) <= m(i(c) + nu(c)) - (n-1)(m-1) for m = 1..m_max,
// reported per m with equality flagged.
struct HingstonLine {
  long m = 1;
  long lhs = 0;
  long rhs = 0;
  bool holds = false;
  bool equality = false;
};
struct HingstonReport {
  bool all_hold = true;
  std::vector<HingstonLine> lines;
};
HingstonReport hingston_check(const IndexSeed& s, int n, long m_max);

}  // namespace maslov
