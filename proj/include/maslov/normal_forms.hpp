#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maslov/angle.hpp"
#include "maslov/matrix.hpp"
#include "maslov/spectrum.hpp"

namespace maslov {

// One 2x2 or 4x4 building block of a symplectic homotopy component.
enum class FormKind {
  hyperbolic,  // D(lambda) = diag(lambda, 1/lambda), lambda = +-2
  shear,       // N1(eps, b) = [[eps, b], [0, eps]], eps = +-1, b in {-1,0,1}
  rotation,    // R(theta), theta/pi in (0,2) \ {1}
  twist,       // N2 = [[R(theta), b], [0, R(theta)]], trivial or not
  residual,    // stand-in for a block with no unit-circle spectrum
};

struct BasicForm {
  FormKind kind;
  int sign = 1;                      // hyperbolic: sign of lambda; shear: eps
  int shear_b = 0;                   // shear only, in {-1, 0, 1}
  std::optional<AngleOverPi> angle;  // rotation and twist
  bool twist_trivial = false;        // twist only

  static BasicForm hyperbolic_d(int sign);
  static BasicForm shear(int eps, int b);
  static BasicForm rotation(const AngleOverPi& theta);
  static BasicForm twist(const AngleOverPi& theta, bool trivial);

  int order() const { return kind == FormKind::twist ? 4 : 2; }
  std::string to_string() const;
};

// Counted block content of a homotopy component: how many shear blocks of
// each type sit at the eigenvalues +-1, the rotation angles, the twist
// angles split by type, and the order of the part with no unit-circle
// spectrum. Angle ratios are theta/pi in (0,2) excluding 1.
//
// p_minus, p_zero, p_plus count N1(1,1), I2, N1(1,-1); q_minus, q_zero,
// q_plus count N1(-1,1), -I2, N1(-1,-1). The names follow the sign of the
// block's contribution to index growth, not the sign of the shear entry.
struct Decomposition {
  int p_minus = 0, p_zero = 0, p_plus = 0;
  int q_minus = 0, q_zero = 0, q_plus = 0;
  std::vector<AngleOverPi> rotations;      // theta_j, direction-sensitive
  std::vector<AngleOverPi> nontrivial_n2;  // alpha_j, side-insensitive
  std::vector<AngleOverPi> trivial_n2;     // beta_j, side-insensitive
  int residual_order = 0;                  // even; order of the circle-free part
  std::optional<SymplecticMatrix> residual_matrix;  // optional explicit part

  int rotation_count() const { return static_cast<int>(rotations.size()); }
  int nontrivial_n2_count() const {
    return static_cast<int>(nontrivial_n2.size());
  }
  int trivial_n2_count() const { return static_cast<int>(trivial_n2.size()); }

  // Total order of the built matrix in 2x2 units (the "n-1" of the block
  // count identity).
  int half_order() const;

  // Total algebraic multiplicity on the unit circle of the built matrix.
  int elliptic_height() const;

  // Geometric multiplicity of the eigenvalue 1 (resp. -1) of the built
  // matrix.
  int nu_at_one() const { return p_minus + 2 * p_zero + p_plus; }
  int nu_at_minus_one() const { return q_minus + 2 * q_zero + q_plus; }

  // Flat block list in canonical assembly order.
  std::vector<BasicForm> blocks() const;

  // Throws std::invalid_argument when a structural invariant fails.
  void validate() const;

  // Copy with angle lists sorted ascending and twist angles folded onto the
  // (0, pi) side; rotations keep their stored side.
  Decomposition normalized() const;

  // Equality of the invariant data up to angle-list reordering and the
  // twist-side fold; angle comparison is exact when both sides are exact,
  // tolerance-based otherwise. The residual part is compared by order only.
  bool equivalent_to(const Decomposition& o, double tol = 1e-9) const;

  std::string to_string() const;
};

// The data preserved along a homotopy component: unit-circle spectrum with
// algebraic multiplicities plus the geometric multiplicity at each entry.
struct HomotopyInvariants {
  CircleSpectrum spectrum;
  std::vector<int> nullities;  // aligned with spectrum.entries

  bool equivalent_to(const HomotopyInvariants& o, double tol = 1e-9) const;
  std::string to_string() const;
};

// One-sided index jumps at a unit-circle point.
struct SplittingPair {
  int s_plus = 0;
  int s_minus = 0;
  bool operator==(const SplittingPair& o) const {
    return s_plus == o.s_plus && s_minus == o.s_minus;
  }
};

// Concrete matrices for the individual blocks. Exact when the angle allows
// rational entries (ratio 1/2 or 3/2, or no angle at all), floating
// otherwise.
MatQ form_hyperbolic(int sign);
MatQ form_shear(int eps, int b);
SymplecticMatrix form_rotation(const AngleOverPi& theta);
SymplecticMatrix form_twist(const AngleOverPi& theta, bool trivial);
SymplecticMatrix build_form(const BasicForm& f);

// Assembles the interleaved product of all blocks of d in canonical order.
// The result is exact iff every block admits rational entries.
SymplecticMatrix build(const Decomposition& d);

// Spectrum-plus-nullity data of M. Errors on ambiguous float spectra.
HomotopyInvariants homotopy_invariants(const SymplecticMatrix& m);

// Recovers the block content of M for orders up to 8 when M is similar to a
// product of the supported blocks. Direction and twist-type decisions use
// exact signature computations whenever the relevant eigenvalue pair has a
// rational cosine; otherwise they fall back to eigenvector arithmetic in
// floating point. Unsupported structure (e.g. a Jordan block of size 3 at
// the eigenvalue 1) raises "unsupported normal form".
Decomposition decompose(const SymplecticMatrix& m);

// Splitting numbers of a single block at omega, from the frozen table.
SplittingPair form_splitting(const BasicForm& f, const AngleOverPi& omega);

// Block-additive splitting numbers of build(d) at omega. Comparisons
// between exact and floating angles use a 1e-9 tolerance and emit a warning
// on stderr.
SplittingPair splitting_numbers(const Decomposition& d,
                                const AngleOverPi& omega);

}  // namespace maslov
