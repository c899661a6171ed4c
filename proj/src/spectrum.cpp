#include "maslov/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace maslov {

namespace {

constexpr double kOnCircleTol = 1e-9;
constexpr double kAmbiguousTol = 1e-7;
constexpr int kMaxExactOrder = 16;

// Best rational approximation p/q with q <= max_den via continued fractions;
// used to report exact angle kinds when a float angle is indistinguishable
// from a small fraction.
bool snap_to_rational(double x, long max_den, double tol, Rational* out) {
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(v);
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den || q2 < 0) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double rem = v - fl;
    if (rem < 1e-15) break;
    v = 1.0 / rem;
  }
  if (q1 == 0) return false;
  if (std::fabs(x - static_cast<double>(p1) / q1) > tol) return false;
  *out = make_rational(p1, q1);
  return true;
}

void add_entry(std::vector<SpectrumEntry>& entries, const AngleOverPi& angle,
               int mult) {
  for (auto& e : entries) {
    if (e.angle.same_point(angle, 1e-12)) {
      e.multiplicity += mult;
      return;
    }
  }
  entries.push_back({angle, mult});
}

void sort_entries(std::vector<SpectrumEntry>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) {
              bool a1 = a.angle.is_one(), b1 = b.angle.is_one();
              if (a1 != b1) return a1;  // eigenvalue 1 first, it sits at angle 0
              return a.angle < b.angle;
            });
}

CircleSpectrum exact_circle_spectrum(const MatQ& m) {
  if (m.rows() > kMaxExactOrder)
    throw std::invalid_argument("exact spectrum supported up to order 16");
  PolyQ p = char_poly(m);
  if (!is_self_reciprocal(p))
    throw std::invalid_argument("characteristic polynomial is not self-reciprocal");
  std::vector<SpectrumEntry> entries;
  // Roots of unity factor through cyclotomic polynomials; divide them out.
  for (int d = 1; d <= 2 * kMaxExactOrder * 2; ++d) {
    if (euler_phi(d) > p.degree()) continue;
    const PolyQ& phi = cyclotomic(d);
    while (p.degree() >= phi.degree() && p.divisible_by(phi)) {
      p = p.divmod(phi).first;
      if (d == 1) {
        add_entry(entries, AngleOverPi::from_rational(2, 1), 1);
      } else if (d == 2) {
        add_entry(entries, AngleOverPi::from_rational(1, 1), 1);
      } else {
        for (int k = 1; k < d; ++k) {
          if (std::gcd(k, d) != 1) continue;
          add_entry(entries, AngleOverPi::from_rational(2L * k, d), 1);
        }
      }
    }
  }
  // The remainder has no roots of unity. Its unit-circle pairs have
  // irrational angle over pi (hence transcendental ratio), found by counting
  // roots of the x + 1/x transform inside (-2, 2).
  if (p.degree() > 0) {
    PolyQ q = reciprocal_transform(p);
    for (const auto& [factor, mult] : squarefree_decomposition(q)) {
      if (factor(Rational(-2)) == 0 || factor(Rational(2)) == 0)
        throw std::logic_error("unexpected root of unity in residual spectrum");
      auto brackets = isolate_real_roots(factor, Rational(-2), Rational(2),
                                         make_rational(1, 1L << 40));
      for (const auto& [lo, hi] : brackets) {
        double z = (to_double(lo) + to_double(hi)) / 2;
        double ratio = std::acos(z / 2) / M_PI;  // in (0, 1)
        add_entry(entries, AngleOverPi::from_float(ratio), mult);
        add_entry(entries, AngleOverPi::from_float(2.0 - ratio), mult);
      }
    }
  }
  sort_entries(entries);
  return CircleSpectrum{std::move(entries)};
}

// Defective on-circle eigenvalues split radially by about sqrt(machine eps)
// under any eigensolver, in reciprocal pairs (1+delta, 1-delta). Clustering
// nearby eigenvalues and testing the cluster's geometric-mean modulus keeps
// the 1e-9 on-circle / 1e-7 ambiguity bands meaningful for them: a straddling
// pair has mean modulus 1 + O(delta^2).
CircleSpectrum float_circle_spectrum(const MatD& m) {
  int n = m.rows();
  Eigen::MatrixXd em(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) em(i, j) = m(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(em);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue computation failed");
  std::vector<std::complex<double>> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = es.eigenvalues()(i);
  std::vector<bool> used(n, false);
  std::vector<SpectrumEntry> entries;
  constexpr double kClusterRadius = 1e-6;
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    std::vector<int> cluster{i};
    used[i] = true;
    for (int j = i + 1; j < n; ++j) {
      if (!used[j] && std::abs(ev[j] - ev[i]) < kClusterRadius) {
        used[j] = true;
        cluster.push_back(j);
      }
    }
    double log_mod = 0.0;
    std::complex<double> center(0.0, 0.0);
    for (int j : cluster) {
      log_mod += std::log(std::abs(ev[j]));
      center += ev[j];
    }
    center /= static_cast<double>(cluster.size());
    double off = std::fabs(std::exp(log_mod / cluster.size()) - 1.0);
    if (off > kAmbiguousTol) continue;
    if (off > kOnCircleTol)
      throw std::runtime_error(
          "ambiguous spectrum: eigenvalue modulus near the unit circle "
          "cannot be classified");
    double theta = std::atan2(center.imag(), center.real());
    if (theta < 0) theta += 2 * M_PI;
    double ratio = theta / M_PI;  // in [0, 2)
    AngleOverPi angle = AngleOverPi::from_float(1.0);
    if (ratio < 1e-9 || ratio > 2 - 1e-9) {
      angle = AngleOverPi::from_rational(2, 1);
    } else if (std::fabs(ratio - 1.0) < 1e-9) {
      angle = AngleOverPi::from_rational(1, 1);
    } else {
      Rational snapped;
      if (snap_to_rational(ratio, 1024, 1e-11, &snapped))
        angle = AngleOverPi::from_rational(snapped);
      else
        angle = AngleOverPi::from_float(ratio);
    }
    add_entry(entries, angle, static_cast<int>(cluster.size()));
  }
  sort_entries(entries);
  return CircleSpectrum{std::move(entries)};
}

int float_kernel_dimension(const MatD& m, std::complex<double> omega) {
  int n = m.rows();
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = std::complex<double>(m(i, j), 0.0) -
                (i == j ? omega : std::complex<double>(0.0, 0.0));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  double scale = std::max(1.0, svd.singularValues()(0));
  int dim = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) <= 1e-8 * scale) ++dim;
  return dim;
}

}  // namespace

int CircleSpectrum::total_multiplicity() const {
  int t = 0;
  for (const auto& e : entries) t += e.multiplicity;
  return t;
}

int CircleSpectrum::multiplicity_near(const AngleOverPi& angle,
                                      double tol) const {
  for (const auto& e : entries)
    if (e.angle.same_point(angle, tol)) return e.multiplicity;
  return 0;
}

bool CircleSpectrum::contains_minus_one() const {
  for (const auto& e : entries)
    if (e.angle.is_minus_one()) return true;
  return false;
}

std::string CircleSpectrum::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& e : entries) {
    if (!first) os << ", ";
    first = false;
    os << "(" << (e.angle.is_one() ? "0" : e.angle.to_string()) << ", "
       << e.multiplicity << ")";
  }
  os << "}";
  return os.str();
}

CircleSpectrum circle_spectrum(const SymplecticMatrix& m) {
  return m.is_exact() ? exact_circle_spectrum(m.exact())
                      : float_circle_spectrum(m.floating());
}

int elliptic_height(const SymplecticMatrix& m) {
  return circle_spectrum(m).total_multiplicity();
}

long root_of_unity_order(const Rational& ratio) {
  // exp(i*pi*p/q) has order 2q / gcd(p, 2) for p/q in lowest terms.
  Integer p = ratio.get_num(), q = ratio.get_den();
  Integer ord = 2 * q / (mpz_even_p(p.get_mpz_t()) ? 2 : 1);
  if (!ord.fits_slong_p()) throw std::overflow_error("root of unity order overflow");
  return ord.get_si();
}

int nu_omega(const SymplecticMatrix& m, const AngleOverPi& omega) {
  if (m.is_exact()) {
    switch (omega.kind()) {
      case AngleKind::rational: {
        long d = root_of_unity_order(omega.rational());
        const PolyQ& phi = cyclotomic(static_cast<int>(d));
        // Evaluate phi at the matrix; each Jordan block of each primitive
        // d-th root contributes one kernel dimension, and rational matrices
        // share Jordan data across Galois conjugates.
        const MatQ& mat = m.exact();
        int n = mat.rows();
        MatQ acc(n, n);
        for (int i = phi.degree(); i >= 0; --i) {
          acc = acc * mat;
          for (int k = 0; k < n; ++k) acc(k, k) += phi.coeff(i);
        }
        int kernel = n - rank_exact(acc);
        if (kernel % euler_phi(static_cast<int>(d)) != 0)
          throw std::logic_error("kernel dimension not divisible by totient");
        return kernel / euler_phi(static_cast<int>(d));
      }
      case AngleKind::quadratic:
        // A quadratic-irrational ratio gives a transcendental eigenvalue
        // candidate, never in the spectrum of a rational matrix.
        return 0;
      case AngleKind::floating:
        break;  // fall through to the numerical kernel
    }
  }
  double theta = omega.value() * M_PI;
  return float_kernel_dimension(m.float_view(),
                                std::complex<double>(std::cos(theta), std::sin(theta)));
}

}  // namespace maslov
