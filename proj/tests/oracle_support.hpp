// Perturbation oracle recomputing splitting numbers from the limit
// definition: the splitting numbers of M at a unit-circle spectrum point w
// are the one-sided jumps of the w-index of any path ending at M as w moves
// off the spectrum point along the circle. The w-index of a path with
// nondegenerate end is the signed count of its crossings of the singular set
// {N : det(N - wI) = 0}; the degenerate value at w itself is the infimum of
// the counts over small perturbations of the path, realized here by ramped
// right-translations of the tail minimized over sampled directions in the
// symplectic Lie algebra.
//
// Crossing signs use the canonical co-orientation of the singular set: at a
// regular point N the probe u -> N exp(uJ) defines the positive side, so a
// crossing counts +1 when the determinant function passes zero the same way
// as along the probe and -1 otherwise. A crossing where the probe derivative
// degenerates is a tangency artifact; it contributes zero but taints the
// evaluation, and tainted perturbation directions are excluded from the
// minimization (the infimum is attained in open chambers, so clean
// directions always remain).
//
// Everything here is independent of the library's splitting table.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Cplx = std::complex<double>;
using PathFn = std::function<Mat(double)>;

inline Mat standard_j(int n2) {
  Mat j = Mat::Zero(n2, n2);
  int h = n2 / 2;
  for (int i = 0; i < h; ++i) {
    j(i, h + i) = -1;
    j(h + i, i) = 1;
  }
  return j;
}

// (-1)^(n-1) conj(w)^n det(N - wI), real on Sp(2n) for |w| = 1.
inline double d_omega(const Mat& nmat, double theta) {
  int half = static_cast<int>(nmat.rows()) / 2;
  Cplx w = std::polar(1.0, theta);
  Eigen::MatrixXcd a = nmat.cast<Cplx>();
  for (int i = 0; i < a.rows(); ++i) a(i, i) -= w;
  Cplx val = std::pow(std::conj(w), half) * a.determinant();
  if (half % 2 == 0) val = -val;
  return val.real();
}

// Rotation probe exp(uJ) = block [[cos u I, -sin u I],[sin u I, cos u I]].
inline Mat rot_probe(int n2, double u) {
  Mat r = Mat::Zero(n2, n2);
  int h = n2 / 2;
  for (int i = 0; i < h; ++i) {
    r(i, i) = std::cos(u);
    r(h + i, h + i) = std::cos(u);
    r(i, h + i) = -std::sin(u);
    r(h + i, i) = std::sin(u);
  }
  return r;
}

inline Mat expm(const Mat& x) {
  // Scaling and squaring with a plain series; arguments here are tiny.
  int k = 0;
  double norm = x.norm();
  Mat y = x;
  while (norm > 0.25) {
    y /= 2;
    norm /= 2;
    ++k;
  }
  Mat acc = Mat::Identity(x.rows(), x.cols());
  Mat term = acc;
  for (int i = 1; i <= 16; ++i) {
    term = term * y / i;
    acc += term;
  }
  for (int i = 0; i < k; ++i) acc = acc * acc;
  return acc;
}

// Basis of sp(2n): X = -J S for S in a basis of symmetric matrices.
inline std::vector<Mat> sp_basis(int n2) {
  Mat j = standard_j(n2);
  std::vector<Mat> out;
  for (int i = 0; i < n2; ++i)
    for (int k = i; k < n2; ++k) {
      Mat s = Mat::Zero(n2, n2);
      s(i, k) = 1;
      s(k, i) = 1;
      out.push_back(-j * s);
    }
  return out;
}

struct Crossing {
  double s = 0;      // refined parameter value
  int jump = 0;      // sign of the determinant change
  double slope = 0;  // probe derivative at the crossing
  int sigma = 0;     // signed contribution (0 for a tangency artifact)
};

struct CountResult {
  int net = 0;
  bool clean = true;  // false if any tangency artifact was hit
  std::vector<Crossing> events;
};

// Net signed crossing count of {D_theta = 0} along the path. Samples on a
// uniform grid, carries the last nonzero sign across grid points that land
// exactly on the set, and refines each sign change by bisection. A path may
// start on the set (at the identity when theta = 0); departures from the
// start point are not crossings.
inline CountResult crossing_count(const PathFn& path, double theta,
                                  int samples, bool keep_events = false) {
  constexpr double kTangentTol = 1e-7;
  CountResult res;
  double prev_s = 0.0;
  double prev_f = d_omega(path(0.0), theta);
  for (int i = 1; i <= samples; ++i) {
    double s = static_cast<double>(i) / samples;
    double f = d_omega(path(s), theta);
    if (f == 0.0) continue;  // sign carried to the next sample
    if (prev_f != 0.0 && prev_f * f < 0.0) {
      double lo = prev_s, hi = s, flo = prev_f;
      for (int it = 0; it < 60; ++it) {
        double mid = (lo + hi) / 2;
        double fm = d_omega(path(mid), theta);
        if (fm == 0.0) {
          lo = mid;
          break;
        }
        if (flo * fm < 0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      Crossing ev;
      ev.s = (lo + hi) / 2;
      Mat at = path(ev.s);
      double u = 1e-5;
      ev.slope = (d_omega(at * rot_probe(static_cast<int>(at.rows()), u),
                          theta) -
                  d_omega(at * rot_probe(static_cast<int>(at.rows()), -u),
                          theta)) /
                 (2 * u);
      ev.jump = (f > prev_f) ? 1 : -1;
      if (std::fabs(ev.slope) <= kTangentTol) {
        ev.sigma = 0;
        res.clean = false;
      } else {
        ev.sigma = ev.jump * ((ev.slope > 0) ? 1 : -1);
      }
      res.net += ev.sigma;
      if (keep_events) res.events.push_back(ev);
    }
    prev_s = s;
    prev_f = f;
  }
  return res;
}

// Smooth ramp supported on the tail of the parameter interval.
inline double ramp(double s) {
  double t = (s - 0.7) / 0.3;
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  return t * t * (3 - 2 * t);
}

struct SplitResult {
  int s_plus = 0;
  int s_minus = 0;
  bool ok = false;
};

struct Oracle {
  PathFn path;  // [0,1] -> Sp(2n), path(0) = I
  int n2 = 2;

  // Perturbation directions: the sp(2n) basis, random combinations, and the
  // negated basis, so both sides of every wall get sampled.
  std::vector<Mat> directions(std::mt19937& rng) const {
    std::vector<Mat> dirs = sp_basis(n2);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    int extra = (n2 == 2) ? 24 : 48;
    size_t base = dirs.size();
    for (int i = 0; i < extra; ++i) {
      Mat y = Mat::Zero(n2, n2);
      for (size_t k = 0; k < base; ++k) y += coef(rng) * dirs[k];
      dirs.push_back(y);
    }
    for (size_t k = 0; k < base; ++k) dirs.push_back(-dirs[k]);
    return dirs;
  }

  // w-index count with the endpoint pushed off the singular set along
  // direction y: the inf over such perturbations realizes the degenerate
  // index value.
  CountResult perturbed_count(const Mat& y, double delta, double theta,
                              int samples, bool keep_events = false) const {
    // The product must be materialized inside the lambda; returning the
    // lazy expression would leave it referencing dead temporaries.
    PathFn beta = [this, &y, delta](double s) -> Mat {
      return Mat(path(s) * expm((ramp(s) * delta) * y));
    };
    return crossing_count(beta, theta, samples, keep_events);
  }

  SplitResult splitting(double theta0, double eps, double delta, int samples,
                        std::mt19937& rng) const {
    SplitResult out;

    // Nondegenerate counts just off the spectrum angle. A tainted count is
    // retried at a jittered offset; the value is offset-independent for all
    // small offsets.
    int cp = 0, cm = 0;
    bool boundary_ok = false;
    double e = eps;
    for (int attempt = 0; attempt < 6 && !boundary_ok; ++attempt) {
      CountResult rp = crossing_count(path, theta0 + e, samples);
      CountResult rm = crossing_count(path, theta0 - e, samples);
      if (rp.clean && rm.clean) {
        cp = rp.net;
        cm = rm.net;
        boundary_ok = true;
      }
      e *= 0.83;
    }
    if (!boundary_ok) return out;

    // Degenerate value: minimize over sampled perturbation directions,
    // skipping directions whose endpoint stays on the set or whose count is
    // tainted by a tangency.
    bool have = false;
    int best = 0;
    for (const Mat& y : directions(rng)) {
      Mat endpoint = path(1.0) * expm(delta * y);
      if (std::fabs(d_omega(endpoint, theta0)) < 1e-12) continue;
      CountResult r = perturbed_count(y, delta, theta0, samples);
      if (!r.clean) continue;
      if (!have || r.net < best) {
        best = r.net;
        have = true;
      }
    }
    if (!have) return out;
    out.s_plus = cp - best;
    out.s_minus = cm - best;
    out.ok = true;
    return out;
  }
};

// --- explicit paths ending at each basic form -----------------------------

inline Mat warmup2(double s) {  // I to diag(2, 1/2)
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1 + s;
  m(1, 1) = 1 / (1 + s);
  return m;
}

inline Mat rot2(double a) {
  Mat m(2, 2);
  m(0, 0) = std::cos(a);
  m(0, 1) = -std::sin(a);
  m(1, 0) = std::sin(a);
  m(1, 1) = std::cos(a);
  return m;
}

inline PathFn concat2(const std::function<Mat(double)>& block) {
  return [block](double s) {
    if (s <= 0.5) return warmup2(2 * s);
    return block(2 * s - 1);
  };
}

inline PathFn path_hyperbolic(int sign) {
  return concat2([sign](double u) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 2;
    m(1, 1) = 0.5;
    return sign > 0 ? m : Mat(rot2(u * M_PI) * m);
  });
}

inline PathFn path_shear(int eps, int b) {
  return concat2([eps, b](double u) {
    double lam = 2 - u;
    Mat t = Mat::Zero(2, 2);
    t(0, 0) = lam;
    t(1, 1) = 1 / lam;
    t(0, 1) = (eps > 0 ? b : -b) * u;
    return eps > 0 ? t : Mat(rot2(u * M_PI) * t);
  });
}

inline PathFn path_rotation(double theta0) {
  return concat2([theta0](double u) {
    double lam = 2 - u;
    Mat t = Mat::Zero(2, 2);
    t(0, 0) = lam;
    t(1, 1) = 1 / lam;
    return Mat(rot2(u * theta0) * t);
  });
}

// 4x4 paths. Coordinates (q1, q2, p1, p2).
inline Mat rot4(double a) {
  Mat m = Mat::Zero(4, 4);
  Mat r = rot2(a);
  m.block<2, 2>(0, 0) = r;
  m.block<2, 2>(2, 2) = r;
  return m;
}

inline Mat hyp4(double v) {
  Mat m = Mat::Zero(4, 4);
  double l = std::pow(2.0, v);
  m(0, 0) = l;
  m(1, 1) = l;
  m(2, 2) = 1 / l;
  m(3, 3) = 1 / l;
  return m;
}

// The twist target is [[R(theta), B],[0, R(theta)]], reached along
// [[R(ut), R(ut) u S],[0, R(ut)]] with S = R(theta)^T B symmetric, times a
// shrinking hyperbolic factor.
inline PathFn path_twist(double theta0, const Eigen::Matrix2d& offset) {
  Eigen::Matrix2d rth = rot2(theta0).topLeftCorner<2, 2>();
  Eigen::Matrix2d s_sym = rth.transpose() * offset;

  return [theta0, s_sym](double s) {
    if (s <= 0.5) {
      return hyp4(2 * s);  // I to diag(2,2,1/2,1/2)
    }
    double u = 2 * s - 1;
    Eigen::Matrix2d r = rot2(u * theta0).topLeftCorner<2, 2>();
    Mat m = Mat::Zero(4, 4);
    m.block<2, 2>(0, 0) = r;
    m.block<2, 2>(2, 2) = r;
    m.block<2, 2>(0, 2) = r * (u * s_sym);
    return Mat(m * hyp4(1 - u));
  };
}

// Interleaves two 2x2 paths as one 4x4 path in coordinates (q1, q2, p1, p2).
inline PathFn path_interleave(const PathFn& a, const PathFn& b) {
  return [a, b](double s) {
    Mat x = a(s), y = b(s);
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = x(0, 0);
    m(0, 2) = x(0, 1);
    m(2, 0) = x(1, 0);
    m(2, 2) = x(1, 1);
    m(1, 1) = y(0, 0);
    m(1, 3) = y(0, 1);
    m(3, 1) = y(1, 0);
    m(3, 3) = y(1, 1);
    return m;
  };
}

inline SplitResult oracle_pair(const PathFn& path, int n2, double theta0,
                               unsigned seed, double eps = 5e-3,
                               double delta = 1e-3, int samples = 4096) {
  Oracle o{path, n2};
  std::mt19937 rng(seed);
  return o.splitting(theta0, eps, delta, samples, rng);
}

}  // namespace oracle
