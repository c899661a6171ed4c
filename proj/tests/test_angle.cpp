#include "doctest.h"
#include "maslov/angle.hpp"

#include <stdexcept>

using namespace maslov;

TEST_CASE("angle construction and range") {
  auto a = AngleOverPi::from_rational(1, 2);
  CHECK(a.is_exact());
  CHECK(a.rational() == make_rational(1, 2));
  CHECK_THROWS_AS(AngleOverPi::from_rational(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(AngleOverPi::from_rational(5, 2), std::invalid_argument);
  CHECK_THROWS_AS(AngleOverPi::from_float(-0.25), std::invalid_argument);
  CHECK_NOTHROW(AngleOverPi::from_rational(2, 1));
}

TEST_CASE("special points") {
  CHECK(AngleOverPi::from_rational(2, 1).is_one());
  CHECK(AngleOverPi::from_rational(1, 1).is_minus_one());
  CHECK(!AngleOverPi::from_rational(1, 2).is_one());
}

TEST_CASE("conjugate reflects the angle") {
  auto a = AngleOverPi::from_rational(1, 2);
  CHECK(a.conjugate().rational() == make_rational(3, 2));
  CHECK(AngleOverPi::from_rational(2, 1).conjugate().is_one());
  CHECK(AngleOverPi::from_rational(1, 1).conjugate().is_minus_one());
  auto f = AngleOverPi::from_float(0.3);
  CHECK(f.conjugate().value() == doctest::Approx(1.7));
}

TEST_CASE("quadratic angle ratios stay exact") {
  // ratio = sqrt(2) - 1
  QuadraticNumber q(Rational(-1), Rational(1), 2);
  auto a = AngleOverPi::from_quadratic(q);
  CHECK(a.is_exact());
  CHECK(a.kind() == AngleKind::quadratic);
  CHECK(a.value() == doctest::Approx(0.41421356237));
  // A quadratic that collapses to a rational is demoted.
  QuadraticNumber r(make_rational(1, 2), Rational(0), 0);
  CHECK(AngleOverPi::from_quadratic(r).kind() == AngleKind::rational);
}

TEST_CASE("comparison and same_point") {
  auto a = AngleOverPi::from_rational(1, 2);
  auto b = AngleOverPi::from_rational(2, 3);
  CHECK(a.compare(b) < 0);
  CHECK(b.compare(a) > 0);
  CHECK(a.compare(a) == 0);
  CHECK(a.same_point(AngleOverPi::from_float(0.5)));
  CHECK(!a.same_point(b));
}
