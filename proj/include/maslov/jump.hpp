#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maslov/iteration.hpp"

namespace maslov {

// Which slot of the return-time vector a component occupies.
enum class ComponentRole { mean_reciprocal, angle_over_mean };

struct TorusComponent {
  ComponentRole role = ComponentRole::mean_reciprocal;
  int seed_index = 0;
  std::optional<AngleOverPi> angle;  // set for angle_over_mean slots
  bool exact = true;
  QuadraticNumber value;  // meaningful when exact
  double approx = 0.0;    // double view, always set

  std::string to_string() const;
};

// Simultaneous-return data of a family of index seeds: one reciprocal mean
// index per seed, then one entry per negative index jump on the open circle,
// each divided by its seed's mean index. The layout is all reciprocals
// first, then the angle entries grouped by seed in ascending angle order.
struct TorusVector {
  long m_factor = 1;  // common angle modulus M
  int seed_count = 0;
  std::vector<int> mu;  // negative-jump totals, one per seed
  std::vector<TorusComponent> components;

  int h() const { return static_cast<int>(components.size()); }

  // Throws std::invalid_argument when the layout or positivity fails.
  void validate() const;

  std::string to_string() const;
};

struct Vertex {
  std::vector<int> chi;  // entries in {0,1}

  bool operator==(const Vertex& o) const { return chi == o.chi; }
  bool operator<(const Vertex& o) const { return chi < o.chi; }
  std::string to_string() const;
};

// Integer relation lattice of a torus vector and the tangent space it cuts
// out of R^h.
struct TangentSpace {
  std::vector<std::vector<Integer>> relations;  // Hermite-reduced basis of L
  std::vector<std::vector<Rational>> basis;     // basis of the solution space
  bool bound_exceeded = false;  // a relation needs entries beyond the bound

  int dim() const { return static_cast<int>(basis.size()); }
};

// Pass/fail record for one seed inside a jump certificate.
struct JumpChecks {
  bool m_consistent = false;  // m agrees with the floor formula for its bit
  bool nu_before = false;     // nullity at 2m-1 returns to the seed value
  bool nu_after = false;      // nullity at 2m+1 returns to the seed value
  bool sum_before = false;    // index+nullity at 2m-1 is 2T-(i1+2S(+)-nu1)
  bool index_after = false;   // index at 2m+1 is 2T+i1
  bool even_lower = false;    // index at 2m >= 2T - e/2
  bool even_upper = false;    // index+nullity at 2m <= 2T + e/2
  bool angles_close = false;  // every circle angle is near resonance at m

  bool all() const {
    return m_consistent && nu_before && nu_after && sum_before &&
           index_after && even_lower && even_upper && angles_close;
  }
};

struct JumpCertificate {
  long T = 0;
  std::vector<long> m;  // one witness iterate per seed
  double epsilon = 0.0;
  double delta = 0.0;  // angle-closeness threshold, (2M+1)*epsilon
  Vertex vertex;
  std::vector<JumpChecks> checks;

  bool all_pass() const;
  std::string to_string() const;
};

// Least positive M with M*ratio integral for every exact rational angle
// ratio of every seed. Quadratic and floating ratios impose nothing.
long minimal_angle_modulus(const std::vector<IndexSeed>& seeds);

// Assembles the return-time vector of the seeds at modulus M. Every mean
// index must be positive and M must clear every rational angle; violations
// raise std::invalid_argument naming the offender.
TorusVector build_vector(const std::vector<IndexSeed>& seeds, long M);

// Exact relation lattice L = {k in Z^h : k.v in Z} and the solution space
// V = {x : k.x = 0 for all k in L}. Components must be exact. The basis of L
// is computed exactly; entries beyond relation_bound set bound_exceeded and
// warn on stderr, since a bounded scan would have missed them.
TangentSpace tangent_space(const TorusVector& v, long relation_bound = 1000);

// Sign vertices psi(a) realizable by tangent directions a avoiding the
// coordinate hyperplanes of the irrational components. A rational vector
// (dim 0) yields exactly the zero vertex. Results are sorted and include the
// mirror of every vertex found.
std::vector<Vertex> admissible_set_sample(const TorusVector& v,
                                          const TangentSpace& ts);

// Ascending return times T <= t_bound with M0 | T and
// max_k |{T v_k} - chi_k| < epsilon, fractional parts in [0,1). Exact
// components are decided in exact arithmetic. Throws std::runtime_error
// naming the best near-miss when the scan comes back empty.
std::vector<long> search_T(const TorusVector& v, const Vertex& chi,
                           double epsilon = 1e-3, long M0 = 1,
                           long t_bound = 1000000);

// Evaluates the common-jump identities for the given witnesses. Failed
// checks are recorded, never thrown; only structural mismatches raise.
JumpCertificate certify(const std::vector<IndexSeed>& seeds, long M, long T,
                        const std::vector<long>& m_ks, const Vertex& vertex,
                        double epsilon = 1e-3);

}  // namespace maslov
