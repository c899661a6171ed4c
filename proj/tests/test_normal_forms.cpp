#include "maslov/normal_forms.hpp"

#include <doctest.h>

#include <random>

#include "maslov/spectrum.hpp"

using namespace maslov;

namespace {

MatQ mat2(long a, long b, long c, long d) {
  MatQ m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

AngleOverPi ratio(long num, long den) {
  return AngleOverPi::from_rational(num, den);
}

// Random integer symplectic conjugation: products of elementary symplectic
// generators keep entries rational and the matrix exactly symplectic.
MatQ random_symplectic(int half, std::mt19937& rng) {
  int n = 2 * half;
  MatQ m = MatQ::identity(n);
  std::uniform_int_distribution<int> pick(0, half - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int step = 0; step < 6; ++step) {
    MatQ g = MatQ::identity(n);
    int i = pick(rng), j = pick(rng);
    int c = coef(rng);
    if (step % 2 == 0) {
      // symmetric B block: (I S / 0 I)
      g(i, half + j) += c;
      g(j, half + i) += c;
    } else {
      g(half + i, j) += c;
      g(half + j, i) += c;
    }
    m = m * g;
  }
  return m;
}

}  // namespace

TEST_CASE("basic form matrices") {
  MatQ dpos(2, 2);
  dpos(0, 0) = 2;
  dpos(1, 1) = make_rational(1, 2);
  CHECK(form_hyperbolic(1) == dpos);
  CHECK(form_shear(1, 0) == MatQ::identity(2));
  CHECK(form_shear(-1, 1) == mat2(-1, 1, 0, -1));
  CHECK(is_symplectic_exact(form_shear(1, -1)));
  CHECK_THROWS_AS(form_shear(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(form_hyperbolic(0), std::invalid_argument);

  SymplecticMatrix r = form_rotation(ratio(1, 2));
  CHECK(r.is_exact());
  CHECK(r.exact() == mat2(0, -1, 1, 0));
  SymplecticMatrix r32 = form_rotation(ratio(3, 2));
  CHECK(r32.exact() == mat2(0, 1, -1, 0));
  CHECK_FALSE(form_rotation(ratio(2, 3)).is_exact());
  CHECK_THROWS_AS(form_rotation(ratio(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(form_rotation(ratio(2, 1)), std::invalid_argument);
}

TEST_CASE("twist forms are symplectic and carry the intended type") {
  for (bool trivial : {true, false}) {
    SymplecticMatrix exact = form_twist(ratio(1, 2), trivial);
    CHECK(exact.is_exact());
    CHECK(exact.order() == 4);
    for (double t : {0.3, 0.5, 0.71, 1.3, 1.9}) {
      SymplecticMatrix f = form_twist(AngleOverPi::from_float(t), trivial);
      CHECK(f.order() == 4);
    }
  }
  // A twist never adds kernel at its angle beyond one dimension.
  SymplecticMatrix n2 = form_twist(ratio(1, 2), false);
  CHECK(nu_omega(n2, ratio(1, 2)) == 1);
  CHECK(circle_spectrum(n2).multiplicity_near(ratio(1, 2)) == 2);
}

TEST_CASE("decomposition bookkeeping") {
  Decomposition d;
  d.p_zero = 1;
  d.rotations.push_back(ratio(2, 3));
  d.trivial_n2.push_back(ratio(3, 2));
  CHECK(d.half_order() == 1 + 1 + 2);
  CHECK(d.elliptic_height() == 2 + 2 + 4);
  CHECK(d.nu_at_one() == 2);
  CHECK(d.nu_at_minus_one() == 0);
  CHECK(d.blocks().size() == 3);

  Decomposition folded = d.normalized();
  CHECK(folded.trivial_n2[0] == ratio(1, 2));
  CHECK(d.equivalent_to(folded));

  Decomposition empty;
  CHECK_THROWS_WITH_AS(empty.validate(), "empty decomposition",
                       std::invalid_argument);
  Decomposition bad;
  bad.rotations.push_back(ratio(1, 1));
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("build assembles the diamond product in normal order") {
  Decomposition d;
  d.p_zero = 1;
  SymplecticMatrix m = build(d);
  CHECK(m.is_exact());
  CHECK(m.exact() == MatQ::identity(2));

  Decomposition dr;
  dr.rotations.push_back(ratio(1, 2));
  CHECK(build(dr).exact() == mat2(0, -1, 1, 0));

  Decomposition two;
  two.p_plus = 2;
  SymplecticMatrix mm = build(two);
  CHECK(mm.order() == 4);
  CHECK(mm.exact()(0, 2) == -1);
  CHECK(mm.exact()(1, 3) == -1);
  CHECK(mm.exact()(0, 0) == 1);

  Decomposition res;
  res.residual_order = 2;
  SymplecticMatrix hr = build(res);
  CHECK(hr.exact()(0, 0) == 2);
  CHECK(circle_spectrum(hr).entries.empty());

  // Explicit residual matrices must be hyperbolic.
  Decomposition resbad;
  resbad.residual_order = 2;
  resbad.residual_matrix = SymplecticMatrix{mat2(0, -1, 1, 0)};
  CHECK_THROWS_AS(build(resbad), std::invalid_argument);
}

TEST_CASE("homotopy invariants collect spectrum and kernels") {
  Decomposition d;
  d.p_minus = 1;  // one shear with eigenvalue 1
  HomotopyInvariants h = homotopy_invariants(build(d));
  REQUIRE(h.spectrum.entries.size() == 1);
  CHECK(h.spectrum.entries[0].angle.is_one());
  CHECK(h.spectrum.entries[0].multiplicity == 2);
  CHECK(h.nullities[0] == 1);

  Decomposition d2;
  d2.p_zero = 1;
  HomotopyInvariants h2 = homotopy_invariants(build(d2));
  CHECK(h2.nullities[0] == 2);
  CHECK_FALSE(h.equivalent_to(h2));
  CHECK(h.equivalent_to(h));
}

TEST_CASE("decompose: single blocks round-trip") {
  std::vector<Decomposition> cases;
  {
    Decomposition d;
    d.p_zero = 1;
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.p_minus = 1;
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.p_plus = 1;
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.q_minus = 1;
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.q_zero = 1;
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.q_plus = 1;
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.rotations.push_back(ratio(1, 2));
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.rotations.push_back(ratio(3, 2));
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.rotations.push_back(ratio(2, 3));
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.nontrivial_n2.push_back(ratio(1, 2));
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.trivial_n2.push_back(ratio(1, 2));
    cases.push_back(d);
  }
  {
    Decomposition d;
    d.residual_order = 2;
    cases.push_back(d);
  }
  for (const auto& d : cases) {
    CAPTURE(d.to_string());
    Decomposition back = decompose(build(d));
    CHECK(back.equivalent_to(d));
  }
}

TEST_CASE("decompose: composite products and conjugation invariance") {
  Decomposition d;
  d.p_minus = 1;
  d.q_plus = 1;
  d.rotations.push_back(ratio(2, 3));
  Decomposition back = decompose(build(d));
  CHECK(back.equivalent_to(d));

  // Conjugation by exact symplectic matrices preserves the decomposition.
  std::mt19937 rng(7);
  Decomposition dc;
  dc.rotations.push_back(ratio(1, 2));
  dc.p_plus = 1;
  MatQ m = build(dc).exact();
  for (int trial = 0; trial < 5; ++trial) {
    MatQ s = random_symplectic(2, rng);
    MatQ j = standard_J(2);
    MatQ sinv = (j * s.transpose() * j) * Rational(-1);
    SymplecticMatrix conj{s * m * sinv};
    Decomposition got = decompose(conj);
    CAPTURE(trial);
    CHECK(got.equivalent_to(dc));
  }
}

TEST_CASE("decompose: rotation with non-constructible cosine stays exact") {
  // cos(theta) = 3/5 puts both eigenvalues on the circle at an angle that is
  // no rational multiple of pi; the rational analysis still splits the
  // direction without ever leaving Q.
  MatQ t(2, 2);
  t(0, 0) = make_rational(3, 5);
  t(0, 1) = make_rational(-4, 5);
  t(1, 0) = make_rational(4, 5);
  t(1, 1) = make_rational(3, 5);
  Decomposition d = decompose(SymplecticMatrix{t});
  CHECK(d.rotation_count() == 1);
  CHECK(d.residual_order == 0);
  CHECK_FALSE(d.rotations[0].is_exact());
  CHECK(d.rotations[0].value() ==
        doctest::Approx(std::acos(0.6) / M_PI).epsilon(1e-9));
}

TEST_CASE("decompose: trace-3 exact matrix is pure residual") {
  MatQ m = mat2(3, 1, 2, 1);  // det 1, trace 4: hyperbolic
  Decomposition d = decompose(SymplecticMatrix{m});
  CHECK(d.residual_order == 2);
  CHECK(d.half_order() == 1);
}

TEST_CASE("decompose: float matrices") {
  Decomposition d;
  d.rotations.push_back(AngleOverPi::from_float(0.27));
  d.trivial_n2.push_back(ratio(1, 2));
  SymplecticMatrix m = build(d);
  MatD f = m.float_view();
  Decomposition back = decompose(SymplecticMatrix{f});
  CHECK(back.equivalent_to(d, 1e-6));

  // Defective eigenvalue 1 through the float path.
  MatD shear(2, 2);
  shear(0, 0) = 1;
  shear(0, 1) = 1;
  shear(1, 1) = 1;
  Decomposition ds = decompose(SymplecticMatrix{shear});
  CHECK(ds.p_minus == 1);
  CHECK(ds.p_zero == 0);
  CHECK(ds.p_plus == 0);
}

TEST_CASE("decompose: unsupported jordan structure is refused") {
  // Unipotent product of two symplectic transvections with a Jordan chain
  // longer than 2 at the eigenvalue 1.
  MatQ s1 = MatQ::identity(6);
  s1(0, 3) = 1;  // shear in the B block
  MatQ s2 = MatQ::identity(6);
  s2(1, 0) = 1;  // transvection in A, compensated in D
  s2(3, 4) = -1;
  MatQ m = s1 * s2;
  REQUIRE(is_symplectic_exact(m));
  CHECK_THROWS_WITH_AS(decompose(SymplecticMatrix{m}),
                       doctest::Contains("unsupported normal form"),
                       std::runtime_error);

  MatQ big = MatQ::identity(10);
  CHECK_THROWS_AS(decompose(SymplecticMatrix{big}), std::invalid_argument);
}

TEST_CASE("splitting numbers of the basic forms") {
  AngleOverPi at_one = ratio(2, 1);
  AngleOverPi at_minus_one = ratio(1, 1);

  auto pair_eq = [](SplittingPair p, int a, int b) {
    return p.s_plus == a && p.s_minus == b;
  };

  CHECK(pair_eq(form_splitting(BasicForm::shear(1, 0), at_one), 1, 1));
  CHECK(pair_eq(form_splitting(BasicForm::shear(1, 1), at_one), 1, 1));
  CHECK(pair_eq(form_splitting(BasicForm::shear(1, -1), at_one), 0, 0));
  CHECK(pair_eq(form_splitting(BasicForm::shear(-1, 0), at_minus_one), 1, 1));
  CHECK(pair_eq(form_splitting(BasicForm::shear(-1, 1), at_minus_one), 0, 0));
  CHECK(pair_eq(form_splitting(BasicForm::shear(-1, -1), at_minus_one), 1, 1));
  CHECK(pair_eq(form_splitting(BasicForm::shear(1, 1), at_minus_one), 0, 0));

  BasicForm rot = BasicForm::rotation(ratio(2, 3));
  CHECK(pair_eq(form_splitting(rot, ratio(2, 3)), 0, 1));
  CHECK(pair_eq(form_splitting(rot, ratio(4, 3)), 1, 0));
  CHECK(pair_eq(form_splitting(rot, ratio(1, 3)), 0, 0));

  BasicForm tw = BasicForm::twist(ratio(2, 3), false);
  CHECK(pair_eq(form_splitting(tw, ratio(2, 3)), 1, 1));
  CHECK(pair_eq(form_splitting(tw, ratio(4, 3)), 1, 1));
  BasicForm tt = BasicForm::twist(ratio(2, 3), true);
  CHECK(pair_eq(form_splitting(tt, ratio(2, 3)), 0, 0));

  CHECK(pair_eq(form_splitting(BasicForm::hyperbolic_d(1), at_one), 0, 0));
}

TEST_CASE("splitting numbers add over blocks") {
  Decomposition d;
  d.p_zero = 1;
  d.q_plus = 1;
  d.rotations.push_back(ratio(2, 3));
  d.nontrivial_n2.push_back(ratio(2, 3));

  SplittingPair at_one = splitting_numbers(d, ratio(2, 1));
  CHECK(at_one.s_plus == 1);
  CHECK(at_one.s_minus == 1);
  SplittingPair at_minus = splitting_numbers(d, ratio(1, 1));
  CHECK(at_minus.s_plus == 1);
  CHECK(at_minus.s_minus == 1);
  SplittingPair at_rot = splitting_numbers(d, ratio(2, 3));
  CHECK(at_rot.s_plus == 0 + 1);
  CHECK(at_rot.s_minus == 1 + 1);
  SplittingPair at_conj = splitting_numbers(d, ratio(4, 3));
  CHECK(at_conj.s_plus == 1 + 1);
  CHECK(at_conj.s_minus == 0 + 1);
  SplittingPair off = splitting_numbers(d, ratio(1, 5));
  CHECK(off.s_plus == 0);
  CHECK(off.s_minus == 0);
}

namespace {

// Random block content over the rational-friendly pool (angles 1/2 and 3/2
// keep every built matrix exact). All pool angles share one eigenvalue
// pair, and decompose resolves a pair only when its blocks are uniformly
// rotations or uniformly twists, so the caller fixes the flavor.
Decomposition random_content(std::mt19937& rng, int budget, bool twists) {
  std::uniform_int_distribution<int> pick(0, 9);
  Decomposition d;
  while (d.half_order() < budget) {
    switch (pick(rng)) {
      case 0: d.p_minus++; break;
      case 1: d.p_plus++; break;
      case 2: d.q_minus++; break;
      case 3: d.q_plus++; break;
      case 4:
      case 5: {
        AngleOverPi side = ratio(pick(rng) % 2 ? 3 : 1, 2);
        if (!twists) {
          d.rotations.push_back(side);
        } else if (d.half_order() + 2 <= budget) {
          if (pick(rng) % 2)
            d.trivial_n2.push_back(side);
          else
            d.nontrivial_n2.push_back(side);
        }
        break;
      }
      case 8: d.p_zero++; break;
      case 9: d.residual_order += 2; break;
      default: break;
    }
  }
  d.validate();
  return d;
}

const std::vector<AngleOverPi>& spectrum_panel() {
  static const std::vector<AngleOverPi> panel = {
      AngleOverPi::from_rational(2, 1), AngleOverPi::from_rational(1, 1),
      AngleOverPi::from_rational(1, 2), AngleOverPi::from_rational(3, 2),
      AngleOverPi::from_rational(1, 3), AngleOverPi::from_rational(5, 3)};
  return panel;
}

MatQ symplectic_inverse(const MatQ& s) {
  MatQ j = standard_J(s.rows() / 2);
  return (j * s.transpose() * j) * Rational(-1);
}

}  // namespace

TEST_CASE("splitting numbers are blind to conjugation and off-spectrum points") {
  std::mt19937 rng(2468);
  for (int trial = 0; trial < 30; ++trial) {
    CAPTURE(trial);
    Decomposition d = random_content(rng, 2 + trial % 3, trial % 2 == 0);

    // Points the pool never reaches carry no jump at all.
    SplittingPair off = splitting_numbers(d, ratio(1, 3));
    CHECK(off.s_plus == 0);
    CHECK(off.s_minus == 0);
    off = splitting_numbers(d, ratio(5, 3));
    CHECK(off.s_plus == 0);
    CHECK(off.s_minus == 0);

    MatQ m = build(d).exact();
    MatQ s = random_symplectic(d.half_order(), rng);
    Decomposition back = decompose(SymplecticMatrix{s * m * symplectic_inverse(s)});
    for (const AngleOverPi& omega : spectrum_panel()) {
      CAPTURE(omega.to_string());
      CHECK(splitting_numbers(back, omega) == splitting_numbers(d, omega));
    }
  }
}

TEST_CASE("splitting numbers add under the diamond product") {
  std::mt19937 rng(97531);
  for (int trial = 0; trial < 30; ++trial) {
    CAPTURE(trial);
    bool twists = trial % 2 == 0;
    Decomposition a = random_content(rng, 2, twists);
    Decomposition b = random_content(rng, 2, twists);
    SymplecticMatrix prod = diamond(build(a), build(b));
    Decomposition joint = decompose(prod);
    for (const AngleOverPi& omega : spectrum_panel()) {
      CAPTURE(omega.to_string());
      SplittingPair pa = splitting_numbers(a, omega);
      SplittingPair pb = splitting_numbers(b, omega);
      SplittingPair pj = splitting_numbers(joint, omega);
      CHECK(pj.s_plus == pa.s_plus + pb.s_plus);
      CHECK(pj.s_minus == pa.s_minus + pb.s_minus);
    }
  }
}
