#include "maslov/angle.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace maslov {

namespace {

void check_range_exact(const QuadraticNumber& ratio) {
  if (ratio.sign() <= 0 || ratio.compare(QuadraticNumber(Rational(2))) > 0)
    throw std::invalid_argument("angle ratio outside (0, 2]");
}

}  // namespace

AngleOverPi AngleOverPi::from_rational(const Rational& ratio) {
  QuadraticNumber q{ratio};
  check_range_exact(q);
  AngleOverPi a;
  a.kind_ = AngleKind::rational;
  a.exact_ = q;
  a.value_ = q.to_double();
  return a;
}

AngleOverPi AngleOverPi::from_rational(long num, long den) {
  return from_rational(make_rational(num, den));
}

AngleOverPi AngleOverPi::from_quadratic(const QuadraticNumber& ratio) {
  check_range_exact(ratio);
  if (ratio.is_rational()) return from_rational(ratio.as_rational());
  AngleOverPi a;
  a.kind_ = AngleKind::quadratic;
  a.exact_ = ratio;
  a.value_ = ratio.to_double();
  return a;
}

AngleOverPi AngleOverPi::from_float(double ratio) {
  if (!(ratio > 0.0) || !(ratio <= 2.0) || !std::isfinite(ratio))
    throw std::invalid_argument("angle ratio outside (0, 2]");
  AngleOverPi a;
  a.kind_ = AngleKind::floating;
  a.value_ = ratio;
  return a;
}

const QuadraticNumber& AngleOverPi::exact() const {
  if (kind_ == AngleKind::floating)
    throw std::domain_error("floating angle has no exact ratio");
  return exact_;
}

const Rational& AngleOverPi::rational() const {
  if (kind_ != AngleKind::rational)
    throw std::domain_error("angle ratio is not rational");
  return exact_.as_rational();
}

double AngleOverPi::value() const { return value_; }

bool AngleOverPi::is_one() const {
  return kind_ == AngleKind::rational && exact_.as_rational() == 2;
}

bool AngleOverPi::is_minus_one() const {
  return kind_ == AngleKind::rational && exact_.as_rational() == 1;
}

AngleOverPi AngleOverPi::conjugate() const {
  if (is_one()) return *this;
  switch (kind_) {
    case AngleKind::rational:
      return from_rational(Rational(2) - exact_.as_rational());
    case AngleKind::quadratic:
      return from_quadratic(QuadraticNumber(Rational(2)) - exact_);
    default:
      return from_float(2.0 - value_);
  }
}

int AngleOverPi::compare(const AngleOverPi& o) const {
  if (is_exact() && o.is_exact()) return exact_.compare(o.exact_);
  if (value_ < o.value_) return -1;
  if (value_ > o.value_) return 1;
  return 0;
}

bool AngleOverPi::operator==(const AngleOverPi& o) const {
  if (kind_ != o.kind_) return false;
  return is_exact() ? exact_ == o.exact_ : value_ == o.value_;
}

bool AngleOverPi::same_point(const AngleOverPi& o, double tol) const {
  if (is_exact() && o.is_exact()) return exact_ == o.exact_;
  return std::fabs(value_ - o.value_) <= tol;
}

std::string AngleOverPi::to_string() const {
  if (is_exact()) return exact_.to_string();
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const AngleOverPi& a) {
  return os << a.to_string();
}

}  // namespace maslov
