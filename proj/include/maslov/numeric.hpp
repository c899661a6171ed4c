#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace maslov {

using Integer = mpz_class;
using Rational = mpq_class;

// Rationals are kept canonical: lowest terms, positive denominator.
Rational make_rational(long num, long den);
Rational make_rational(const Integer& num, const Integer& den);

Integer floor_div(const Integer& a, const Integer& b);
Integer floor_rational(const Rational& x);
Integer ceil_rational(const Rational& x);
bool is_integer(const Rational& x);

Integer lcm(const Integer& a, const Integer& b);

double to_double(const Rational& x);
std::string to_string(const Rational& x);

// Sign of X + B*sqrt(d) for integers X, B and d >= 0, computed exactly.
int sign_plus_root(const Integer& X, const Integer& B, const Integer& d);

// Exact value a + b*sqrt(d) with rational a, b and a nonnegative integer
// radicand d. Invariants: d is squarefree, and b == 0 iff d == 0, so the
// representation of any value is unique. Arithmetic between two values with
// different nonzero radicands is refused (single quadratic field per value).
class QuadraticNumber {
 public:
  QuadraticNumber() : a_(0), b_(0), d_(0) {}
  QuadraticNumber(const Rational& a) : a_(a), b_(0), d_(0) {}  // NOLINT
  QuadraticNumber(long a) : a_(a), b_(0), d_(0) {}             // NOLINT
  QuadraticNumber(const Rational& a, const Rational& b, const Integer& d);

  const Rational& rational_part() const { return a_; }
  const Rational& root_coefficient() const { return b_; }
  const Integer& radicand() const { return d_; }

  bool is_rational() const { return d_ == 0; }
  bool is_integer() const;
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  // Exact only for rational values; throws otherwise.
  const Rational& as_rational() const;

  QuadraticNumber operator-() const;
  QuadraticNumber operator+(const QuadraticNumber& o) const;
  QuadraticNumber operator-(const QuadraticNumber& o) const;
  QuadraticNumber operator*(const QuadraticNumber& o) const;
  QuadraticNumber inverse() const;
  QuadraticNumber operator/(const QuadraticNumber& o) const;

  bool operator==(const QuadraticNumber& o) const;
  bool operator!=(const QuadraticNumber& o) const { return !(*this == o); }
  int compare(const QuadraticNumber& o) const;
  bool operator<(const QuadraticNumber& o) const { return compare(o) < 0; }
  bool operator<=(const QuadraticNumber& o) const { return compare(o) <= 0; }
  bool operator>(const QuadraticNumber& o) const { return compare(o) > 0; }
  bool operator>=(const QuadraticNumber& o) const { return compare(o) >= 0; }

  int sign() const;
  Integer floor() const;
  Integer ceil() const;
  QuadraticNumber fractional_part() const;  // x - floor(x), in [0, 1)

  double to_double() const;
  std::string to_string() const;

 private:
  Rational a_, b_;
  Integer d_;
};

std::ostream& operator<<(std::ostream& os, const QuadraticNumber& x);

// Rounding maps used by the index iteration formulae. E is the least integer
// >= a, phi(a) = E(a) - floor(a), which is 0 on integers and 1 elsewhere.
Integer iteration_E(const QuadraticNumber& a);
int iteration_phi(const QuadraticNumber& a);

}  // namespace maslov
