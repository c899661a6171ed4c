#include "maslov/iteration.hpp"

#include <cmath>
#include <stdexcept>

namespace maslov {

namespace {

long to_long(const Integer& v) {
  if (!v.fits_slong_p())
    throw std::overflow_error("iterated index exceeds the machine range");
  return v.get_si();
}

// E and phi of m * ratio / 2, where ratio is the angle over pi. The only
// inexact case is a floating ratio; it is rejected near the jump locus.
struct EPhi {
  Integer e;
  int phi;
};

EPhi e_phi(const AngleOverPi& a, long m) {
  if (a.is_exact()) {
    QuadraticNumber x = a.exact() * QuadraticNumber(make_rational(m, 2));
    return {iteration_E(x), iteration_phi(x)};
  }
  double x = a.value() * static_cast<double>(m) / 2.0;
  double fl = std::floor(x);
  double frac = x - fl;
  if (frac < 1e-12 || frac > 1.0 - 1e-12)
    throw std::runtime_error(
        "precision breakdown: floating angle ratio " +
        std::to_string(a.value()) + " lands on an integer boundary at m = " +
        std::to_string(m));
  return {Integer(static_cast<long>(fl)) + 1, 1};
}

int even_flag(long m) { return m % 2 == 0 ? 1 : 0; }

}  // namespace

void IndexSeed::validate() const {
  d.validate();
  if (nu1 < 0) throw std::invalid_argument("negative initial nullity");
  if (nu1 != d.nu_at_one())
    throw std::invalid_argument(
        "initial nullity does not match the eigenvalue-1 kernel of the "
        "decomposition");
}

long index_iterate(const IndexSeed& s, long m) {
  if (m < 1) throw std::invalid_argument("iteration count must be positive");
  s.validate();
  const Decomposition& d = s.d;
  long r = d.rotation_count();
  long rs = d.nontrivial_n2_count();

  Integer acc = Integer(m) * (Integer(s.i1) + d.p_minus + d.p_zero - r);
  for (const AngleOverPi& th : d.rotations) acc += 2 * e_phi(th, m).e;
  acc -= r + d.p_minus + d.p_zero;
  acc -= even_flag(m) * (d.q_zero + d.q_plus);
  Integer phi_sum = 0;
  for (const AngleOverPi& al : d.nontrivial_n2) phi_sum += e_phi(al, m).phi;
  acc += 2 * (phi_sum - rs);
  return to_long(acc);
}

long nullity_iterate(const IndexSeed& s, long m) {
  if (m < 1) throw std::invalid_argument("iteration count must be positive");
  s.validate();
  const Decomposition& d = s.d;

  Integer acc = s.nu1;
  acc += even_flag(m) * (d.q_minus + 2 * d.q_zero + d.q_plus);
  acc += 2 * (d.rotation_count() + d.nontrivial_n2_count() +
              d.trivial_n2_count());
  Integer phi_sum = 0;
  for (const auto* list : {&d.rotations, &d.nontrivial_n2, &d.trivial_n2})
    for (const AngleOverPi& a : *list) phi_sum += e_phi(a, m).phi;
  acc -= 2 * phi_sum;
  return to_long(acc);
}

IteratedIndex iterate(const IndexSeed& s, long m) {
  return IteratedIndex{m, index_iterate(s, m), nullity_iterate(s, m)};
}

QuadraticNumber mean_index(const IndexSeed& s) {
  s.validate();
  const Decomposition& d = s.d;
  QuadraticNumber acc(Rational(s.i1 + d.p_minus + d.p_zero -
                               d.rotation_count()));
  for (const AngleOverPi& th : d.rotations) {
    if (!th.is_exact())
      throw std::invalid_argument(
          "mean index: exact form needs exact rotation angles");
    try {
      acc = acc + th.exact();
    } catch (const std::exception&) {
      throw std::invalid_argument(
          "mean index: rotation angles span more than one quadratic field");
    }
  }
  return acc;
}

double mean_index_float(const IndexSeed& s) {
  s.validate();
  const Decomposition& d = s.d;
  double acc = static_cast<double>(s.i1 + d.p_minus + d.p_zero -
                                   d.rotation_count());
  for (const AngleOverPi& th : d.rotations) acc += th.value();
  return acc;
}

ParityReport parity_check(const IndexSeed& s) {
  s.validate();
  std::vector<BasicForm> bs = s.d.blocks();
  bool pure_residual = bs.empty() && s.d.residual_order > 0;
  if (!pure_residual && (bs.size() != 1 || s.d.residual_order != 0))
    throw std::invalid_argument(
        "parity check applies to single-block decompositions only");

  ParityReport rep;
  if (pure_residual) {
    rep.required = ParityRequirement::any;
  } else {
    const BasicForm& f = bs.front();
    switch (f.kind) {
      case FormKind::shear:
        // At eigenvalue 1 only the negative shear offset is even; the whole
        // eigenvalue -1 family is odd.
        rep.required = (f.sign == 1 && f.shear_b == -1)
                           ? ParityRequirement::even
                           : ParityRequirement::odd;
        break;
      case FormKind::rotation:
        rep.required = ParityRequirement::odd;
        break;
      case FormKind::twist:
        rep.required = ParityRequirement::even;
        break;
      default:
        rep.required = ParityRequirement::any;
        break;
    }
  }

  bool odd = (s.i1 % 2 + 2) % 2 == 1;
  switch (rep.required) {
    case ParityRequirement::odd:
      rep.ok = odd;
      rep.detail = odd ? "initial index is odd as required"
                       : "initial index must be odd for this block";
      break;
    case ParityRequirement::even:
      rep.ok = !odd;
      rep.detail = !odd ? "initial index is even as required"
                        : "initial index must be even for this block";
      break;
    case ParityRequirement::any:
      rep.ok = true;
      rep.detail = "no parity constraint for this block";
      break;
  }
  return rep;
}

GapBounds gap_bounds_check(const IndexSeed& s, long m) {
  if (m < 1) throw std::invalid_argument("iteration count must be positive");
  long half_e = s.d.elliptic_height() / 2;
  long mid = index_iterate(s, m + 1) - index_iterate(s, m) - s.i1;
  long lower = nullity_iterate(s, m) - half_e;
  long upper = s.nu1 - nullity_iterate(s, m + 1) + half_e;
  GapBounds gb;
  gb.lower_slack = mid - lower;
  gb.upper_slack = upper - mid;
  gb.holds = gb.lower_slack >= 0 && gb.upper_slack >= 0;
  return gb;
}

HingstonReport hingston_check(const IndexSeed& s, int n, long m_max) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
  if (m_max < 1) throw std::invalid_argument("m_max must be positive");
  HingstonReport rep;
  rep.lines.reserve(static_cast<size_t>(m_max));
  for (long m = 1; m <= m_max; ++m) {
    HingstonLine line;
    line.m = m;
    line.lhs = index_iterate(s, m) + nullity_iterate(s, m);
    line.rhs = m * (s.i1 + s.nu1) - static_cast<long>(n - 1) * (m - 1);
    line.holds = line.lhs <= line.rhs;
    line.equality = line.lhs == line.rhs;
    rep.all_hold = rep.all_hold && line.holds;
    rep.lines.push_back(line);
  }
  return rep;
}

}  // namespace maslov
