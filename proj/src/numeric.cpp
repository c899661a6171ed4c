#include "maslov/numeric.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace maslov {

Rational make_rational(long num, long den) {
  return make_rational(Integer(num), Integer(den));
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer floor_rational(const Rational& x) {
  return floor_div(x.get_num(), x.get_den());
}

Integer ceil_rational(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

bool is_integer(const Rational& x) { return x.get_den() == 1; }

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

double to_double(const Rational& x) { return x.get_d(); }

std::string to_string(const Rational& x) { return x.get_str(); }

int sign_plus_root(const Integer& X, const Integer& B, const Integer& d) {
  if (B == 0 || d == 0) return sgn(X);
  Integer Bd2 = B * B * d;
  if (B > 0) {
    if (X >= 0) return (X == 0 && Bd2 == 0) ? 0 : 1;
    // X < 0: compare X^2 against B^2 d.
    Integer X2 = X * X;
    return -cmp(X2, Bd2);
  }
  // B < 0.
  if (X <= 0) return (X == 0 && Bd2 == 0) ? 0 : -1;
  Integer X2 = X * X;
  return cmp(X2, Bd2);
}

namespace {

// Strips square factors out of d so radicands are canonical. Radicands in
// practice are tiny (2, 3, 5, ...), so trial division is plenty.
void normalize_radicand(Rational& a, Rational& b, Integer& d) {
  if (b == 0) {
    d = 0;
    return;
  }
  if (d < 0) throw std::invalid_argument("negative radicand");
  if (d == 0) {
    b = 0;
    return;
  }
  Integer root;
  mpz_sqrt(root.get_mpz_t(), d.get_mpz_t());
  if (root * root == d) {
    a += b * Rational(root);
    b = 0;
    d = 0;
    return;
  }
  for (Integer p = 2; p * p <= d && p <= 1000000; ++p) {
    while (d % (p * p) == 0) {
      d /= p * p;
      b *= p;
    }
  }
}

}  // namespace

QuadraticNumber::QuadraticNumber(const Rational& a, const Rational& b,
                                 const Integer& d)
    : a_(a), b_(b), d_(d) {
  normalize_radicand(a_, b_, d_);
  if (b_ == 0) d_ = 0;
}

bool QuadraticNumber::is_integer() const {
  return d_ == 0 && maslov::is_integer(a_);
}

const Rational& QuadraticNumber::as_rational() const {
  if (!is_rational()) throw std::domain_error("value is irrational");
  return a_;
}

QuadraticNumber QuadraticNumber::operator-() const {
  QuadraticNumber r;
  r.a_ = -a_;
  r.b_ = -b_;
  r.d_ = d_;
  return r;
}

QuadraticNumber QuadraticNumber::operator+(const QuadraticNumber& o) const {
  if (d_ != 0 && o.d_ != 0 && d_ != o.d_)
    throw std::domain_error("mixed radicands");
  Integer d = d_ != 0 ? d_ : o.d_;
  return QuadraticNumber(a_ + o.a_, b_ + o.b_, d);
}

QuadraticNumber QuadraticNumber::operator-(const QuadraticNumber& o) const {
  return *this + (-o);
}

QuadraticNumber QuadraticNumber::operator*(const QuadraticNumber& o) const {
  if (d_ != 0 && o.d_ != 0 && d_ != o.d_)
    throw std::domain_error("mixed radicands");
  Integer d = d_ != 0 ? d_ : o.d_;
  Rational a = a_ * o.a_ + b_ * o.b_ * Rational(d);
  Rational b = a_ * o.b_ + b_ * o.a_;
  return QuadraticNumber(a, b, d);
}

QuadraticNumber QuadraticNumber::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  if (is_rational()) return QuadraticNumber(Rational(1) / a_);
  // 1/(a + b sqrt d) = (a - b sqrt d)/(a^2 - b^2 d); the norm is nonzero
  // because d is not a perfect square.
  Rational norm = a_ * a_ - b_ * b_ * Rational(d_);
  return QuadraticNumber(a_ / norm, -b_ / norm, d_);
}

QuadraticNumber QuadraticNumber::operator/(const QuadraticNumber& o) const {
  return *this * o.inverse();
}

bool QuadraticNumber::operator==(const QuadraticNumber& o) const {
  return a_ == o.a_ && b_ == o.b_ && d_ == o.d_;
}

int QuadraticNumber::sign() const {
  if (d_ == 0) return sgn(a_);
  // sign(a + b sqrt d): clear denominators and compare integer parts.
  Integer X = a_.get_num() * b_.get_den();
  Integer B = b_.get_num() * a_.get_den();
  return sign_plus_root(X, B, d_);
}

int QuadraticNumber::compare(const QuadraticNumber& o) const {
  return (*this - o).sign();
}

Integer QuadraticNumber::floor() const {
  if (d_ == 0) return floor_rational(a_);
  // Value is (A + B sqrt d)/C with C > 0.
  Integer C = a_.get_den() * b_.get_den();
  Integer A = a_.get_num() * b_.get_den();
  Integer B = b_.get_num() * a_.get_den();
  // k <= x iff 0 <= A - kC + B sqrt d; bracket with integer sqrt bounds of
  // B sqrt d and bisect on that exact predicate.
  auto at_most_value = [&](const Integer& j) {
    return sign_plus_root(A - j * C, B, d_) >= 0;
  };
  Integer s;
  mpz_sqrt(s.get_mpz_t(), d_.get_mpz_t());
  Integer root_lo = B * s;
  Integer root_hi = B * (s + 1);
  if (B < 0) std::swap(root_lo, root_hi);
  Integer lo = floor_div(A + root_lo, C);
  Integer hi = floor_div(A + root_hi, C) + 1;
  while (lo < hi) {
    Integer mid = floor_div(lo + hi + 1, 2);
    if (at_most_value(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

Integer QuadraticNumber::ceil() const { return -((-*this).floor()); }

QuadraticNumber QuadraticNumber::fractional_part() const {
  return *this - QuadraticNumber(Rational(floor()));
}

double QuadraticNumber::to_double() const {
  double r = a_.get_d();
  if (d_ != 0) r += b_.get_d() * std::sqrt(d_.get_d());
  return r;
}

std::string QuadraticNumber::to_string() const {
  if (d_ == 0) return a_.get_str();
  std::string s = a_ == 0 ? "" : a_.get_str();
  if (b_ > 0 && !s.empty()) s += "+";
  s += b_.get_str() + "*sqrt(" + d_.get_str() + ")";
  return s;
}

std::ostream& operator<<(std::ostream& os, const QuadraticNumber& x) {
  return os << x.to_string();
}

Integer iteration_E(const QuadraticNumber& a) { return a.ceil(); }

int iteration_phi(const QuadraticNumber& a) {
  return a.is_integer() ? 0 : 1;
}

}  // namespace maslov
