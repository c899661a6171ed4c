#include <doctest.h>

#include <random>
#include <stdexcept>

#include "maslov/iteration.hpp"

using maslov::AngleOverPi;
using maslov::Decomposition;
using maslov::GapBounds;
using maslov::HingstonReport;
using maslov::IndexSeed;
using maslov::Integer;
using maslov::IteratedIndex;
using maslov::ParityReport;
using maslov::ParityRequirement;
using maslov::QuadraticNumber;
using maslov::Rational;

namespace {

AngleOverPi ratio(long num, long den) {
  return AngleOverPi::from_rational(num, den);
}

IndexSeed seed_of(Decomposition d, long i1) {
  IndexSeed s;
  s.d = std::move(d);
  s.i1 = i1;
  s.nu1 = s.d.nu_at_one();
  return s;
}

// sqrt(2) - 1 as an exact angle ratio, about 0.4142.
AngleOverPi root2_ratio() {
  return AngleOverPi::from_quadratic(
      QuadraticNumber(Rational(-1), Rational(1), Integer(2)));
}

Decomposition random_decomposition(std::mt19937& rng) {
  std::uniform_int_distribution<int> small(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<long> den_pick(2, 12);
  Decomposition d;
  d.p_minus = small(rng);
  d.p_zero = small(rng);
  d.p_plus = small(rng);
  d.q_minus = small(rng);
  d.q_zero = small(rng);
  d.q_plus = small(rng);
  int rot = small(rng);
  auto random_ratio = [&]() {
    while (true) {
      long den = den_pick(rng);
      std::uniform_int_distribution<long> num_pick(1, 2 * den - 1);
      long num = num_pick(rng);
      if (num != den) return ratio(num, den);
    }
  };
  for (int i = 0; i < rot; ++i) d.rotations.push_back(random_ratio());
  if (coin(rng)) d.nontrivial_n2.push_back(random_ratio());
  if (coin(rng)) d.trivial_n2.push_back(random_ratio());
  d.residual_order = 2 * coin(rng);
  if (d.half_order() == 0) d.p_zero = 1;
  return d;
}

}  // namespace

TEST_CASE("iterates collapse to the seed at m = 1") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<long> i1_pick(-5, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    IndexSeed s = seed_of(random_decomposition(rng), i1_pick(rng));
    CAPTURE(trial);
    REQUIRE(maslov::index_iterate(s, 1) == s.i1);
    REQUIRE(maslov::nullity_iterate(s, 1) == s.nu1);
  }
}

TEST_CASE("third-roots rotation walks 1,1,1,3") {
  Decomposition d;
  d.rotations.push_back(ratio(2, 3));
  IndexSeed s = seed_of(d, 1);
  long want[] = {1, 1, 1, 3};
  for (long m = 1; m <= 4; ++m) {
    CAPTURE(m);
    CHECK(maslov::index_iterate(s, m) == want[m - 1]);
  }
  CHECK(maslov::nullity_iterate(s, 3) == 2);
  CHECK(maslov::nullity_iterate(s, 4) == 0);
}

TEST_CASE("identity-plus-negative-shear family is affine in m") {
  // i(m) = m(i1 + p0) - p0, nullity constant.
  for (int p0 : {0, 1, 3}) {
    for (int pp : {0, 2}) {
      if (p0 + pp == 0) continue;
      Decomposition d;
      d.p_zero = p0;
      d.p_plus = pp;
      IndexSeed s = seed_of(d, 2);
      CAPTURE(p0);
      CAPTURE(pp);
      for (long m = 1; m <= 200; ++m) {
        REQUIRE(maslov::index_iterate(s, m) == m * (s.i1 + p0) - p0);
        REQUIRE(maslov::nullity_iterate(s, m) == s.nu1);
      }
    }
  }
}

TEST_CASE("rotation next to a negative shear matches the closed form") {
  // i(m) = m(i1 - 1) + 2E(m theta / 2pi) - 1 for odd i1.
  for (auto [num, den] : {std::pair<long, long>{1, 2},
                          std::pair<long, long>{5, 7}}) {
    Decomposition d;
    d.rotations.push_back(ratio(num, den));
    d.p_plus = 1;
    IndexSeed s = seed_of(d, 3);
    CAPTURE(num);
    CAPTURE(den);
    for (long m = 1; m <= 200; ++m) {
      Integer e = maslov::iteration_E(
          QuadraticNumber(maslov::make_rational(m * num, 2 * den)));
      Integer want = Integer(m) * (s.i1 - 1) + 2 * e - 1;
      REQUIRE(Integer(maslov::index_iterate(s, m)) == want);
    }
  }
}

TEST_CASE("nullity of a rational-irrational rotation pair") {
  // The irrational angle never degenerates, so nullity is 2 exactly at the
  // multiples of the rational angle's denominator.
  Decomposition d;
  d.rotations.push_back(root2_ratio());
  d.rotations.push_back(ratio(2, 3));
  IndexSeed s = seed_of(d, 2);
  for (long m = 1; m <= 60; ++m) {
    CAPTURE(m);
    REQUIRE(maslov::nullity_iterate(s, m) == (m % 3 == 0 ? 2 : 0));
  }
}

TEST_CASE("nullity of a rotation next to an odd negative-eigenvalue shear") {
  Decomposition d;
  d.rotations.push_back(root2_ratio());
  d.q_minus = 1;
  IndexSeed s = seed_of(d, 1);
  for (long m = 1; m <= 40; ++m) {
    CAPTURE(m);
    REQUIRE(maslov::nullity_iterate(s, m) == (m % 2 == 0 ? 1 : 0));
  }
}

TEST_CASE("mean index closed form") {
  SUBCASE("single rotation") {
    Decomposition d;
    d.rotations.push_back(ratio(2, 3));
    IndexSeed s = seed_of(d, 1);
    CHECK(maslov::mean_index(s) == QuadraticNumber(Rational(2, 3)));
  }
  SUBCASE("quadratic rotation keeps the radical") {
    Decomposition d;
    d.rotations.push_back(root2_ratio());
    IndexSeed s = seed_of(d, 1);
    CHECK(maslov::mean_index(s) ==
          QuadraticNumber(Rational(-1), Rational(1), Integer(2)));
    CHECK(maslov::mean_index_float(s) ==
          doctest::Approx(0.41421356).epsilon(1e-8));
  }
  SUBCASE("purely hyperbolic seed has integer mean index") {
    Decomposition d;
    d.residual_order = 4;
    IndexSeed s = seed_of(d, 7);
    CHECK(maslov::mean_index(s) == QuadraticNumber(Rational(7)));
  }
  SUBCASE("exact form refuses floating angles and mixed fields") {
    Decomposition d;
    d.rotations.push_back(AngleOverPi::from_float(0.31));
    IndexSeed s = seed_of(d, 1);
    CHECK_THROWS_AS(maslov::mean_index(s), std::invalid_argument);
    CHECK(maslov::mean_index_float(s) == doctest::Approx(0.31));

    Decomposition d2;
    d2.rotations.push_back(root2_ratio());
    d2.rotations.push_back(AngleOverPi::from_quadratic(
        QuadraticNumber(Rational(-1), Rational(1), Integer(3))));
    IndexSeed s2 = seed_of(d2, 1);
    CHECK_THROWS_AS(maslov::mean_index(s2), std::invalid_argument);
  }
}

TEST_CASE("index stays within 2n of the mean line") {
  Decomposition d;
  d.rotations.push_back(root2_ratio());
  d.rotations.push_back(ratio(2, 3));
  d.p_zero = 1;
  IndexSeed s = seed_of(d, 1);
  QuadraticNumber ihat = maslov::mean_index(s);
  long two_n = 2 * (s.d.half_order() + 1);
  for (long m = 1; m <= 10000; ++m) {
    QuadraticNumber diff = QuadraticNumber(Rational(maslov::index_iterate(
                               s, m))) -
                           ihat * QuadraticNumber(Rational(m));
    if (diff.sign() < 0) diff = -diff;
    if (!(diff <= QuadraticNumber(Rational(two_n)))) {
      CAPTURE(m);
      REQUIRE(diff <= QuadraticNumber(Rational(two_n)));
    }
  }
}

TEST_CASE("parity rules per block") {
  auto single = [](Decomposition d, long i1) { return seed_of(d, i1); };

  Decomposition neg_shear;
  neg_shear.p_plus = 1;
  ParityReport rep = maslov::parity_check(single(neg_shear, 2));
  CHECK(rep.ok);
  CHECK(rep.required == ParityRequirement::even);

  Decomposition rot;
  rot.rotations.push_back(ratio(2, 3));
  rep = maslov::parity_check(single(rot, 2));
  CHECK_FALSE(rep.ok);
  CHECK(rep.required == ParityRequirement::odd);

  Decomposition res;
  res.residual_order = 2;
  rep = maslov::parity_check(single(res, 7));
  CHECK(rep.ok);
  CHECK(rep.required == ParityRequirement::any);

  Decomposition pos_shear;
  pos_shear.p_minus = 1;
  rep = maslov::parity_check(single(pos_shear, 1));
  CHECK(rep.ok);
  CHECK(rep.required == ParityRequirement::odd);

  Decomposition twist;
  twist.nontrivial_n2.push_back(ratio(1, 2));
  rep = maslov::parity_check(single(twist, 0));
  CHECK(rep.ok);
  CHECK(rep.required == ParityRequirement::even);

  Decomposition composite;
  composite.p_zero = 1;
  composite.rotations.push_back(ratio(2, 3));
  CHECK_THROWS_WITH_AS(maslov::parity_check(single(composite, 1)),
                       doctest::Contains("single-block"),
                       std::invalid_argument);
}

TEST_CASE("gap bounds hold with explicit slacks") {
  SUBCASE("third-roots rotation") {
    Decomposition d;
    d.rotations.push_back(ratio(2, 3));
    IndexSeed s = seed_of(d, 1);
    for (long m = 1; m <= 12; ++m) {
      GapBounds gb = maslov::gap_bounds_check(s, m);
      CAPTURE(m);
      CHECK(gb.holds);
    }
  }
  SUBCASE("identity block is tight on both sides") {
    Decomposition d;
    d.p_zero = 1;
    IndexSeed s = seed_of(d, 1);
    for (long m : {1L, 2L, 7L, 100L}) {
      GapBounds gb = maslov::gap_bounds_check(s, m);
      CAPTURE(m);
      CHECK(gb.holds);
    }
  }
  SUBCASE("random rational-angle seeds") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<long> i1_pick(-4, 4);
    for (int trial = 0; trial < 60; ++trial) {
      IndexSeed s = seed_of(random_decomposition(rng), i1_pick(rng));
      CAPTURE(trial);
      for (long m = 1; m <= 200; ++m) {
        GapBounds gb = maslov::gap_bounds_check(s, m);
        if (!gb.holds) {
          CAPTURE(m);
          CAPTURE(gb.lower_slack);
          CAPTURE(gb.upper_slack);
          REQUIRE(gb.holds);
        }
      }
    }
  }
}

TEST_CASE("superlinear growth test") {
  SUBCASE("full identity-plus-negative-shear content gives equality") {
    Decomposition d;
    d.p_zero = 2;
    d.p_plus = 1;
    IndexSeed s = seed_of(d, 2);
    int n = 1 + s.d.half_order();
    HingstonReport rep = maslov::hingston_check(s, n, 50);
    CHECK(rep.all_hold);
    for (const auto& line : rep.lines) {
      CAPTURE(line.m);
      CHECK(line.equality);
    }
  }
  SUBCASE("m = 1 is always an equality") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      IndexSeed s = seed_of(random_decomposition(rng), trial % 5);
      HingstonReport rep = maslov::hingston_check(s, 3, 1);
      REQUIRE(rep.lines.size() == 1);
      CHECK(rep.lines[0].equality);
    }
  }
  SUBCASE("irrational rotation on a surface fails beyond the threshold") {
    Decomposition d;
    d.rotations.push_back(root2_ratio());
    IndexSeed s = seed_of(d, 1);
    HingstonReport rep = maslov::hingston_check(s, 2, 100);
    CHECK_FALSE(rep.all_hold);
    // (sqrt(2)-1)/2 per iterate: the floor stays zero through m = 4.
    CHECK(rep.lines[3].holds);
    CHECK_FALSE(rep.lines[4].holds);
  }
}

TEST_CASE("rational angles make the iteration eventually periodic") {
  Decomposition d;
  d.rotations.push_back(ratio(2, 3));
  d.rotations.push_back(ratio(1, 2));
  d.nontrivial_n2.push_back(ratio(5, 6));
  d.q_plus = 1;
  IndexSeed s = seed_of(d, 1);
  long period = 2 * 6;  // twice the lcm of the ratio denominators
  long shift = maslov::index_iterate(s, 1 + period) - maslov::index_iterate(s, 1);
  for (long m = 1; m <= 30; ++m) {
    CAPTURE(m);
    REQUIRE(maslov::index_iterate(s, m + period) -
                maslov::index_iterate(s, m) ==
            shift);
    REQUIRE(maslov::nullity_iterate(s, m + period) ==
            maslov::nullity_iterate(s, m));
  }
}

TEST_CASE("floating angles agree with exact ones away from the jump locus") {
  Decomposition ex;
  ex.rotations.push_back(ratio(2, 3));
  Decomposition fl;
  fl.rotations.push_back(AngleOverPi::from_float(2.0 / 3.0));
  IndexSeed se = seed_of(ex, 1);
  IndexSeed sf = seed_of(fl, 1);
  for (long m = 1; m <= 50; ++m) {
    CAPTURE(m);
    if (m % 3 == 0) {
      // The exact iterate lands on an integer; the float substrate cannot
      // decide the jump and must refuse.
      CHECK_THROWS_WITH_AS(maslov::index_iterate(sf, m),
                           doctest::Contains("precision breakdown"),
                           std::runtime_error);
    } else {
      REQUIRE(maslov::index_iterate(sf, m) == maslov::index_iterate(se, m));
      REQUIRE(maslov::nullity_iterate(sf, m) ==
              maslov::nullity_iterate(se, m));
    }
  }
}

TEST_CASE("seed validation") {
  Decomposition d;
  d.p_zero = 1;
  IndexSeed s;
  s.d = d;
  s.i1 = 1;
  s.nu1 = 1;  // the identity block carries kernel dimension 2
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("does not match"),
                       std::invalid_argument);
  s.nu1 = 2;
  CHECK_NOTHROW(s.validate());
  CHECK_THROWS_AS(maslov::index_iterate(s, 0), std::invalid_argument);

  IteratedIndex both = maslov::iterate(s, 4);
  CHECK(both.m == 4);
  CHECK(both.index == maslov::index_iterate(s, 4));
  CHECK(both.nullity == maslov::nullity_iterate(s, 4));
}
