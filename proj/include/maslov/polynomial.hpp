#pragma once

#include <utility>
#include <vector>

#include "maslov/numeric.hpp"

namespace maslov {

// Dense univariate polynomial over Q, coefficient of x^i at index i.
// Trailing zero coefficients are always stripped; the zero polynomial has an
// empty coefficient vector and degree -1.
class PolyQ {
 public:
  PolyQ() = default;
  explicit PolyQ(std::vector<Rational> coeffs);
  static PolyQ constant(const Rational& c);
  static PolyQ monomial(int degree, const Rational& c = Rational(1));

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rational& leading() const;
  Rational coeff(int i) const;
  const std::vector<Rational>& coeffs() const { return c_; }

  Rational operator()(const Rational& x) const;

  PolyQ operator+(const PolyQ& o) const;
  PolyQ operator-(const PolyQ& o) const;
  PolyQ operator*(const PolyQ& o) const;
  PolyQ operator*(const Rational& s) const;
  bool operator==(const PolyQ& o) const { return c_ == o.c_; }

  PolyQ derivative() const;
  PolyQ monic() const;

  // Euclidean division; the divisor must be nonzero.
  std::pair<PolyQ, PolyQ> divmod(const PolyQ& divisor) const;
  bool divisible_by(const PolyQ& divisor) const;

  // Multiplicity of the rational root a (0 when p(a) != 0).
  int root_multiplicity(const Rational& a) const;

 private:
  std::vector<Rational> c_;
  void strip();
};

PolyQ poly_gcd(PolyQ a, PolyQ b);

// Squarefree decomposition p = prod f_k^k (Yun). Returns (f_k, k) pairs with
// nonconstant f_k only.
std::vector<std::pair<PolyQ, int>> squarefree_decomposition(const PolyQ& p);

// Number of distinct real roots of a squarefree polynomial in the open
// interval (a, b). Endpoints must not be roots.
int sturm_count_open(const PolyQ& squarefree, const Rational& a,
                     const Rational& b);

// Isolating subdivision: distinct real roots of a squarefree polynomial in
// (a, b), each bracketed to width <= width. Endpoints must not be roots.
std::vector<std::pair<Rational, Rational>> isolate_real_roots(
    const PolyQ& squarefree, const Rational& a, const Rational& b,
    const Rational& width);

// The d-th cyclotomic polynomial, exact integer coefficients.
const PolyQ& cyclotomic(int d);

// Euler totient, used to pace cyclotomic candidate scans.
int euler_phi(int d);

bool is_self_reciprocal(const PolyQ& p);

// For a self-reciprocal p of even degree 2m, the unique q of degree m with
// p(x) = x^m q(x + 1/x). Roots of p on the unit circle at angle theta map to
// roots of q at 2*cos(theta) in [-2, 2].
PolyQ reciprocal_transform(const PolyQ& p);

}  // namespace maslov
