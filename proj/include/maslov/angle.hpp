#pragma once

#include <iosfwd>
#include <string>

#include "maslov/numeric.hpp"

namespace maslov {

enum class AngleKind { rational, quadratic, floating };

// An angle theta on the unit circle stored as the ratio theta/pi, with
// theta in (0, 2*pi]. Ratio 2 encodes theta = 2*pi, i.e. the eigenvalue 1;
// ratio 1 encodes the eigenvalue -1. The kind is never guessed: rational and
// quadratic ratios are exact, floating ratios carry double precision only.
class AngleOverPi {
 public:
  static AngleOverPi from_rational(const Rational& ratio);
  static AngleOverPi from_rational(long num, long den);
  static AngleOverPi from_quadratic(const QuadraticNumber& ratio);
  static AngleOverPi from_float(double ratio);

  AngleKind kind() const { return kind_; }
  bool is_exact() const { return kind_ != AngleKind::floating; }

  // Exact ratio; throws for floating angles.
  const QuadraticNumber& exact() const;
  const Rational& rational() const;
  double value() const;  // double view of the ratio, any kind

  bool is_one() const;        // ratio 2, eigenvalue 1
  bool is_minus_one() const;  // ratio 1, eigenvalue -1

  // The ratio of 2*pi - theta, i.e. the conjugate eigenvalue. Ratios 1 and 2
  // are self-conjugate.
  AngleOverPi conjugate() const;

  // Total order used for sorted angle lists: by value, exact comparison
  // whenever both sides are exact.
  int compare(const AngleOverPi& o) const;
  bool operator<(const AngleOverPi& o) const { return compare(o) < 0; }
  bool operator==(const AngleOverPi& o) const;
  bool operator!=(const AngleOverPi& o) const { return !(*this == o); }

  // True when the two angles denote the same spectrum point, allowing a
  // tolerance when a floating side is involved.
  bool same_point(const AngleOverPi& o, double tol = 1e-9) const;

  std::string to_string() const;

 private:
  AngleOverPi() = default;
  AngleKind kind_ = AngleKind::rational;
  QuadraticNumber exact_;  // rational and quadratic kinds
  double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const AngleOverPi& a);

}  // namespace maslov
