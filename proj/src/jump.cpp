#include "maslov/jump.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "maslov/normal_forms.hpp"

namespace maslov {

namespace {

long to_long(const Integer& x) {
  if (!x.fits_slong_p())
    throw std::overflow_error("jump witness exceeds the machine range");
  return x.get_si();
}

// All unit-circle angle ratios of d, lists concatenated. The +-1 points are
// not stored as ratios; callers that need them add ratio 1 explicitly (the
// eigenvalue 1 never matters here: its fractional parts vanish identically).
std::vector<AngleOverPi> listed_angles(const Decomposition& d) {
  std::vector<AngleOverPi> out;
  out.insert(out.end(), d.rotations.begin(), d.rotations.end());
  out.insert(out.end(), d.nontrivial_n2.begin(), d.nontrivial_n2.end());
  out.insert(out.end(), d.trivial_n2.begin(), d.trivial_n2.end());
  return out;
}

bool has_float_angle(const Decomposition& d) {
  for (const auto& a : listed_angles(d))
    if (!a.is_exact()) return true;
  return false;
}

// Per-seed data shared by build_vector's two layout passes.
struct SeedProfile {
  bool exact = true;
  QuadraticNumber ihat;
  double ihat_f = 0.0;
  std::vector<AngleOverPi> alphas;  // ascending, one entry per negative jump
};

SeedProfile profile_seed(const IndexSeed& s, int idx) {
  SeedProfile out;
  out.exact = !has_float_angle(s.d);
  if (out.exact) {
    out.ihat = mean_index(s);
    if (out.ihat.sign() <= 0)
      throw std::invalid_argument("mean index of seed " + std::to_string(idx) +
                                  " is not positive: " + out.ihat.to_string());
    out.ihat_f = out.ihat.to_double();
  } else {
    out.ihat_f = mean_index_float(s);
    if (!(out.ihat_f > 0))
      throw std::invalid_argument("mean index of seed " + std::to_string(idx) +
                                  " is not positive: " +
                                  std::to_string(out.ihat_f));
  }

  // Distinct spectrum points on the open circle, eigenvalue 1 excluded.
  std::vector<AngleOverPi> points;
  auto add_point = [&points](const AngleOverPi& a) {
    if (a.is_one()) return;
    for (const auto& p : points)
      if (p.same_point(a)) return;
    points.push_back(a);
  };
  if (s.d.q_minus + s.d.q_zero + s.d.q_plus > 0)
    add_point(AngleOverPi::from_rational(1, 1));
  for (const auto& a : listed_angles(s.d)) {
    add_point(a);
    add_point(a.conjugate());
  }
  std::sort(points.begin(), points.end());
  for (const auto& p : points) {
    SplittingPair sp = splitting_numbers(s.d, p);
    for (int j = 0; j < sp.s_minus; ++j) out.alphas.push_back(p);
  }
  return out;
}

using IntRows = std::vector<std::vector<Integer>>;

// Z-basis of {x in Z^h : A x = 0} via unimodular column reduction. Column
// operations on A are mirrored on an identity matrix; the columns facing the
// zeroed-out part of A span the kernel saturated in Z^h.
IntRows integer_kernel(IntRows a, int h) {
  int t = static_cast<int>(a.size());
  IntRows u(h, std::vector<Integer>(h, 0));
  for (int i = 0; i < h; ++i) u[i][i] = 1;
  int pivot = 0;
  for (int row = 0; row < t && pivot < h; ++row) {
    int lead = -1;
    for (int c = pivot; c < h; ++c) {
      if (a[row][c] == 0) continue;
      if (lead < 0) {
        lead = c;
        continue;
      }
      Integer g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(),
                 a[row][lead].get_mpz_t(), a[row][c].get_mpz_t());
      Integer p = a[row][lead] / g, q = a[row][c] / g;
      for (int r = 0; r < t; ++r) {
        Integer nl = x * a[r][lead] + y * a[r][c];
        Integer nc = p * a[r][c] - q * a[r][lead];
        a[r][lead] = nl;
        a[r][c] = nc;
      }
      for (int r = 0; r < h; ++r) {
        Integer nl = x * u[r][lead] + y * u[r][c];
        Integer nc = p * u[r][c] - q * u[r][lead];
        u[r][lead] = nl;
        u[r][c] = nc;
      }
    }
    if (lead >= 0) {
      for (int r = 0; r < t; ++r) std::swap(a[r][lead], a[r][pivot]);
      for (int r = 0; r < h; ++r) std::swap(u[r][lead], u[r][pivot]);
      ++pivot;
    }
  }
  IntRows basis;
  for (int c = pivot; c < h; ++c) {
    std::vector<Integer> col(h);
    for (int r = 0; r < h; ++r) col[r] = u[r][c];
    basis.push_back(std::move(col));
  }
  return basis;
}

// Hermite canonical basis of the row lattice: echelon, positive pivots,
// entries above a pivot reduced into [0, pivot).
IntRows hnf_rows(IntRows m, int h) {
  int rank = 0;
  for (int col = 0; col < h && rank < static_cast<int>(m.size()); ++col) {
    int lead = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r) {
      if (m[r][col] == 0) continue;
      if (lead < 0) {
        lead = r;
        continue;
      }
      Integer g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(),
                 m[lead][col].get_mpz_t(), m[r][col].get_mpz_t());
      Integer p = m[lead][col] / g, q = m[r][col] / g;
      for (int c = 0; c < h; ++c) {
        Integer nl = x * m[lead][c] + y * m[r][c];
        Integer nr = p * m[r][c] - q * m[lead][c];
        m[lead][c] = nl;
        m[r][c] = nr;
      }
    }
    if (lead < 0) continue;
    std::swap(m[lead], m[rank]);
    if (m[rank][col] < 0)
      for (int c = 0; c < h; ++c) m[rank][c] = -m[rank][c];
    for (int r = 0; r < rank; ++r) {
      Integer f = floor_div(m[r][col], m[rank][col]);
      if (f == 0) continue;
      for (int c = 0; c < h; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  m.resize(rank);
  return m;
}

// Echelon basis of {x in Q^h : R x = 0} with free coordinates set to 1.
std::vector<std::vector<Rational>> rational_kernel(const IntRows& rows,
                                                   int h) {
  std::vector<std::vector<Rational>> m;
  for (const auto& row : rows) {
    std::vector<Rational> r(h);
    for (int c = 0; c < h; ++c) r[c] = Rational(row[c]);
    m.push_back(std::move(r));
  }
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < h && rank < static_cast<int>(m.size()); ++col) {
    int lead = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r)
      if (m[r][col] != 0) {
        lead = r;
        break;
      }
    if (lead < 0) continue;
    std::swap(m[lead], m[rank]);
    Rational inv = m[rank][col];
    for (int c = 0; c < h; ++c) m[rank][c] /= inv;
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (int c = 0; c < h; ++c) m[r][c] -= f * m[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<std::vector<Rational>> basis;
  for (int col = 0; col < h; ++col) {
    if (std::find(pivot_col.begin(), pivot_col.end(), col) != pivot_col.end())
      continue;
    std::vector<Rational> vec(h, Rational(0));
    vec[col] = 1;
    for (int r = 0; r < rank; ++r) vec[pivot_col[r]] = -m[r][col];
    basis.push_back(std::move(vec));
  }
  return basis;
}

// Deviation of the fractional part of value*T from the bit chi, exactly for
// exact components. Returns the deviation as a double for near-miss
// bookkeeping and the hit decision against eps (exact when possible).
struct FracResult {
  bool hit = false;
  double deviation = 0.0;
};

FracResult frac_deviation(const TorusComponent& c, long T, int chi,
                          const Rational& eps_exact, double eps) {
  FracResult out;
  if (c.exact) {
    QuadraticNumber f =
        (c.value * QuadraticNumber(Rational(T))).fractional_part();
    QuadraticNumber dev =
        chi == 0 ? f : QuadraticNumber(Rational(1)) - f;
    out.hit = dev < QuadraticNumber(eps_exact);
    out.deviation = dev.to_double();
  } else {
    double f = c.approx * static_cast<double>(T);
    f -= std::floor(f);
    double dev = chi == 0 ? f : 1.0 - f;
    out.hit = dev < eps;
    out.deviation = dev;
  }
  return out;
}

// min({m*ratio}, 1-{m*ratio}) < delta, decided exactly for exact ratios.
bool angle_near_resonance(const AngleOverPi& a, long m,
                          const Rational& delta_exact, double delta) {
  if (a.is_exact()) {
    QuadraticNumber f =
        (a.exact() * QuadraticNumber(Rational(m))).fractional_part();
    QuadraticNumber one_minus = QuadraticNumber(Rational(1)) - f;
    QuadraticNumber d(delta_exact);
    return f < d || one_minus < d;
  }
  double f = a.value() * static_cast<double>(m);
  f -= std::floor(f);
  return std::min(f, 1.0 - f) < delta;
}

}  // namespace

std::string TorusComponent::to_string() const {
  std::ostringstream os;
  if (role == ComponentRole::mean_reciprocal)
    os << "1/(M*ihat[" << seed_index << "])";
  else
    os << angle->to_string() << "/ihat[" << seed_index << "]";
  os << " = " << (exact ? value.to_string() : std::to_string(approx));
  return os.str();
}

void TorusVector::validate() const {
  if (seed_count <= 0)
    throw std::invalid_argument("return-time vector without seeds");
  if (static_cast<int>(mu.size()) != seed_count)
    throw std::invalid_argument("per-seed jump totals out of shape");
  int expected = seed_count;
  for (int m : mu) {
    if (m < 0) throw std::invalid_argument("negative jump total");
    expected += m;
  }
  if (h() != expected)
    throw std::invalid_argument("component count disagrees with seed count "
                                "plus jump totals");
  for (const auto& c : components) {
    bool positive = c.exact ? c.value.sign() > 0
                            : (std::isfinite(c.approx) && c.approx > 0);
    if (!positive)
      throw std::invalid_argument("component not positive: " + c.to_string());
  }
}

std::string TorusVector::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < h(); ++i) {
    if (i) os << ", ";
    os << (components[i].exact ? components[i].value.to_string()
                               : std::to_string(components[i].approx));
  }
  os << ")";
  return os.str();
}

std::string Vertex::to_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < chi.size(); ++i) {
    if (i) os << ",";
    os << chi[i];
  }
  os << ")";
  return os.str();
}

bool JumpCertificate::all_pass() const {
  for (const auto& c : checks)
    if (!c.all()) return false;
  return !checks.empty();
}

std::string JumpCertificate::to_string() const {
  std::ostringstream os;
  os << "T = " << T << ", m = (";
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) os << ", ";
    os << m[i];
  }
  os << "), vertex " << vertex.to_string() << ", "
     << (all_pass() ? "all checks pass" : "some checks fail");
  return os.str();
}

long minimal_angle_modulus(const std::vector<IndexSeed>& seeds) {
  Integer m = 1;
  for (const auto& s : seeds)
    for (const auto& a : listed_angles(s.d))
      if (a.kind() == AngleKind::rational)
        m = lcm(m, Integer(a.rational().get_den()));
  return to_long(m);
}

TorusVector build_vector(const std::vector<IndexSeed>& seeds, long M) {
  if (seeds.empty())
    throw std::invalid_argument("build_vector needs at least one seed");
  if (M < 1) throw std::invalid_argument("angle modulus must be positive");

  std::vector<SeedProfile> profiles;
  for (size_t i = 0; i < seeds.size(); ++i) {
    const IndexSeed& s = seeds[i];
    s.validate();
    for (const auto& a : listed_angles(s.d)) {
      if (a.kind() != AngleKind::rational) continue;
      Integer den = a.rational().get_den();
      if (Integer(M) % den != 0)
        throw std::invalid_argument(
            "angle modulus " + std::to_string(M) +
            " does not clear the rational angle ratio " + a.to_string() +
            " of seed " + std::to_string(i));
    }
    profiles.push_back(profile_seed(s, static_cast<int>(i)));
  }

  TorusVector out;
  out.m_factor = M;
  out.seed_count = static_cast<int>(seeds.size());
  for (size_t i = 0; i < seeds.size(); ++i) {
    const SeedProfile& p = profiles[i];
    TorusComponent c;
    c.role = ComponentRole::mean_reciprocal;
    c.seed_index = static_cast<int>(i);
    c.exact = p.exact;
    if (p.exact) {
      c.value = QuadraticNumber(Rational(1)) /
                (QuadraticNumber(Rational(M)) * p.ihat);
      c.approx = c.value.to_double();
    } else {
      c.approx = 1.0 / (static_cast<double>(M) * p.ihat_f);
    }
    out.components.push_back(std::move(c));
    out.mu.push_back(static_cast<int>(p.alphas.size()));
  }
  for (size_t i = 0; i < seeds.size(); ++i) {
    const SeedProfile& p = profiles[i];
    for (const auto& alpha : p.alphas) {
      TorusComponent c;
      c.role = ComponentRole::angle_over_mean;
      c.seed_index = static_cast<int>(i);
      c.angle = alpha;
      c.exact = p.exact && alpha.is_exact();
      if (c.exact) {
        c.value = alpha.exact() / p.ihat;
        c.approx = c.value.to_double();
      } else {
        c.approx = alpha.value() / p.ihat_f;
      }
      out.components.push_back(std::move(c));
    }
  }
  out.validate();
  return out;
}

TangentSpace tangent_space(const TorusVector& v, long relation_bound) {
  if (relation_bound < 1)
    throw std::invalid_argument("relation bound must be positive");
  int h = v.h();
  for (int k = 0; k < h; ++k)
    if (!v.components[k].exact)
      throw std::invalid_argument(
          "exact kinds required: component " + std::to_string(k) +
          " of the return-time vector is floating");

  // Split each component into rational part and per-radicand coefficient.
  std::vector<Rational> rat(h);
  std::vector<Integer> radicands;
  std::vector<std::vector<Rational>> coeff;  // one row per radicand
  for (int k = 0; k < h; ++k) {
    const QuadraticNumber& x = v.components[k].value;
    rat[k] = x.rational_part();
    if (x.is_rational()) continue;
    int row = -1;
    for (size_t t = 0; t < radicands.size(); ++t)
      if (radicands[t] == x.radicand()) row = static_cast<int>(t);
    if (row < 0) {
      radicands.push_back(x.radicand());
      coeff.emplace_back(h, Rational(0));
      row = static_cast<int>(radicands.size()) - 1;
    }
    coeff[row][k] = x.root_coefficient();
  }

  // k.v in Z forces the coefficient of each radical to vanish: integer
  // kernel of the cleared coefficient rows.
  IntRows a;
  for (const auto& row : coeff) {
    Integer den = 1;
    for (const auto& q : row) den = lcm(den, Integer(q.get_den()));
    std::vector<Integer> cleared(h);
    for (int c = 0; c < h; ++c) {
      Rational scaled = row[c] * Rational(den);
      cleared[c] = scaled.get_num();
    }
    a.push_back(std::move(cleared));
  }
  IntRows radical_free = integer_kernel(std::move(a), h);

  // Inside that kernel, k.v = k.rat must itself be an integer: a congruence
  // cut of index dividing the common denominator.
  TangentSpace out;
  if (!radical_free.empty()) {
    int s = static_cast<int>(radical_free.size());
    Integer d = 1;
    for (const auto& q : rat) d = lcm(d, Integer(q.get_den()));
    std::vector<Integer> w(s);
    for (int i = 0; i < s; ++i) {
      Rational acc(0);
      for (int c = 0; c < h; ++c) acc += rat[c] * Rational(radical_free[i][c]);
      acc *= Rational(d);
      w[i] = acc.get_num();
    }
    IntRows congruence(1, std::vector<Integer>(s + 1));
    for (int i = 0; i < s; ++i) congruence[0][i] = w[i];
    congruence[0][s] = d;
    IntRows cut = integer_kernel(std::move(congruence), s + 1);
    IntRows raw;
    for (const auto& ce : cut) {
      std::vector<Integer> rel(h, 0);
      for (int i = 0; i < s; ++i)
        for (int c = 0; c < h; ++c) rel[c] += ce[i] * radical_free[i][c];
      bool zero = true;
      for (const auto& x : rel)
        if (x != 0) zero = false;
      if (!zero) raw.push_back(std::move(rel));
    }
    out.relations = hnf_rows(std::move(raw), h);
  }

  for (const auto& rel : out.relations)
    for (const auto& x : rel)
      if (abs(x) > relation_bound) out.bound_exceeded = true;
  if (out.bound_exceeded)
    std::cerr << "warning: a relation needs coefficients beyond "
              << relation_bound << "; a bounded scan would have missed it\n";

  out.basis = rational_kernel(out.relations, h);
  return out;
}

std::vector<Vertex> admissible_set_sample(const TorusVector& v,
                                          const TangentSpace& ts) {
  int h = v.h();
  if (ts.dim() == 0) {
    Vertex zero;
    zero.chi.assign(h, 0);
    return {zero};
  }
  int s = ts.dim();
  std::vector<bool> irrational(h);
  for (int k = 0; k < h; ++k)
    irrational[k] = v.components[k].exact
                        ? !v.components[k].value.is_rational()
                        : true;

  std::vector<std::vector<long>> coeffs;
  for (int i = 0; i < s; ++i) {
    std::vector<long> e(s, 0);
    e[i] = 1;
    coeffs.push_back(e);
  }
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j)
      for (long sj : {1L, -1L}) {
        std::vector<long> e(s, 0);
        e[i] = 1;
        e[j] = sj;
        coeffs.push_back(e);
      }
  for (long lambda : {2L, 3L, 5L, 7L}) {
    std::vector<long> e(s);
    long p = 1;
    for (int i = 0; i < s; ++i) {
      e[i] = p;
      p *= lambda;
    }
    coeffs.push_back(e);
  }
  size_t plain = coeffs.size();
  for (size_t i = 0; i < plain; ++i) {
    std::vector<long> neg = coeffs[i];
    for (auto& x : neg) x = -x;
    coeffs.push_back(std::move(neg));
  }

  std::set<Vertex> found;
  for (const auto& c : coeffs) {
    std::vector<Rational> a(h, Rational(0));
    for (int i = 0; i < s; ++i)
      for (int k = 0; k < h; ++k) a[k] += Rational(c[i]) * ts.basis[i][k];
    bool admissible = false;  // nonzero somewhere
    for (int k = 0; k < h; ++k)
      if (a[k] != 0) admissible = true;
    for (int k = 0; k < h && admissible; ++k)
      if (irrational[k] && a[k] == 0) admissible = false;
    if (!admissible) continue;
    Vertex vert;
    vert.chi.resize(h);
    for (int k = 0; k < h; ++k) vert.chi[k] = a[k] < 0 ? 1 : 0;
    found.insert(std::move(vert));
  }
  return std::vector<Vertex>(found.begin(), found.end());
}

std::vector<long> search_T(const TorusVector& v, const Vertex& chi,
                           double epsilon, long M0, long t_bound) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  if (M0 < 1) throw std::invalid_argument("divisor M0 must be positive");
  if (t_bound < M0)
    throw std::invalid_argument("search bound below the first candidate");
  if (static_cast<int>(chi.chi.size()) != v.h())
    throw std::invalid_argument("vertex length disagrees with the vector");
  for (int bit : chi.chi)
    if (bit != 0 && bit != 1)
      throw std::invalid_argument("vertex entries must be bits");

  Rational eps_exact(epsilon);  // dyadic, exact image of the double
  std::vector<long> hits;
  long best_t = 0;
  double best_dev = 2.0;
  for (long t = M0; t <= t_bound; t += M0) {
    double worst = 0.0;
    bool ok = true;
    for (int k = 0; k < v.h(); ++k) {
      FracResult fr =
          frac_deviation(v.components[k], t, chi.chi[k], eps_exact, epsilon);
      worst = std::max(worst, fr.deviation);
      if (!fr.hit) {
        ok = false;
        // Keep scanning components only for near-miss reporting on small
        // vectors; bail out once the deviation can no longer be the best.
        if (worst >= best_dev) break;
      }
    }
    if (ok) {
      hits.push_back(t);
    } else if (worst < best_dev) {
      best_dev = worst;
      best_t = t;
    }
  }
  if (hits.empty()) {
    std::ostringstream os;
    os << "no return time found for T <= " << t_bound << " with " << M0
       << " | T; best near-miss T = " << best_t << " at deviation "
       << best_dev;
    throw std::runtime_error(os.str());
  }
  return hits;
}

JumpCertificate certify(const std::vector<IndexSeed>& seeds, long M, long T,
                        const std::vector<long>& m_ks, const Vertex& vertex,
                        double epsilon) {
  if (seeds.empty()) throw std::invalid_argument("certify needs seeds");
  if (seeds.size() != m_ks.size())
    throw std::invalid_argument("one witness iterate per seed required");
  if (vertex.chi.size() < seeds.size())
    throw std::invalid_argument("vertex too short for the seed family");
  if (M < 1) throw std::invalid_argument("angle modulus must be positive");
  if (T < 1) throw std::invalid_argument("return time must be positive");

  JumpCertificate cert;
  cert.T = T;
  cert.m = m_ks;
  cert.epsilon = epsilon;
  cert.delta = (2.0 * static_cast<double>(M) + 1.0) * epsilon;
  cert.vertex = vertex;
  Rational delta_exact(cert.delta);

  for (size_t k = 0; k < seeds.size(); ++k) {
    const IndexSeed& s = seeds[k];
    s.validate();
    long m = m_ks[k];
    if (m < 1) throw std::invalid_argument("witness iterate must be positive");
    JumpChecks c;

    // Recompute the floor formula for this seed's bit.
    if (!has_float_angle(s.d)) {
      QuadraticNumber ratio = QuadraticNumber(Rational(T)) /
                              (QuadraticNumber(Rational(M)) * mean_index(s));
      Integer expected = (ratio.floor() + vertex.chi[k]) * M;
      c.m_consistent = Integer(m) == expected;
    } else {
      double ratio = static_cast<double>(T) /
                     (static_cast<double>(M) * mean_index_float(s));
      c.m_consistent = m == (static_cast<long>(std::floor(ratio)) +
                             vertex.chi[k]) * M;
    }

    long nu1 = s.nu1;
    long s_plus_one =
        splitting_numbers(s.d, AngleOverPi::from_rational(2, 1)).s_plus;
    long half_e = s.d.elliptic_height() / 2;

    c.nu_before = nullity_iterate(s, 2 * m - 1) == nu1;
    c.nu_after = nullity_iterate(s, 2 * m + 1) == nu1;
    c.sum_before =
        index_iterate(s, 2 * m - 1) + nullity_iterate(s, 2 * m - 1) ==
        2 * T - (s.i1 + 2 * s_plus_one - nu1);
    c.index_after = index_iterate(s, 2 * m + 1) == 2 * T + s.i1;
    c.even_lower = index_iterate(s, 2 * m) >= 2 * T - half_e;
    c.even_upper =
        index_iterate(s, 2 * m) + nullity_iterate(s, 2 * m) <= 2 * T + half_e;

    c.angles_close = true;
    for (const auto& a : listed_angles(s.d))
      if (!angle_near_resonance(a, m, delta_exact, cert.delta))
        c.angles_close = false;

    cert.checks.push_back(c);
  }
  return cert;
}

}  // namespace maslov
