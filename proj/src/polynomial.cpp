#include "maslov/polynomial.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace maslov {

PolyQ::PolyQ(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { strip(); }

PolyQ PolyQ::constant(const Rational& c) { return PolyQ({c}); }

PolyQ PolyQ::monomial(int degree, const Rational& c) {
  std::vector<Rational> v(degree + 1, Rational(0));
  v[degree] = c;
  return PolyQ(std::move(v));
}

void PolyQ::strip() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rational& PolyQ::leading() const {
  if (c_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
  return c_.back();
}

Rational PolyQ::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
  return c_[i];
}

Rational PolyQ::operator()(const Rational& x) const {
  Rational r(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

PolyQ PolyQ::operator+(const PolyQ& o) const {
  std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
  return PolyQ(std::move(v));
}

PolyQ PolyQ::operator-(const PolyQ& o) const {
  std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) - o.coeff(i);
  return PolyQ(std::move(v));
}

PolyQ PolyQ::operator*(const PolyQ& o) const {
  if (is_zero() || o.is_zero()) return PolyQ();
  std::vector<Rational> v(c_.size() + o.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  return PolyQ(std::move(v));
}

PolyQ PolyQ::operator*(const Rational& s) const {
  std::vector<Rational> v(c_);
  for (auto& x : v) x *= s;
  return PolyQ(std::move(v));
}

PolyQ PolyQ::derivative() const {
  if (c_.size() <= 1) return PolyQ();
  std::vector<Rational> v(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Rational(static_cast<long>(i));
  return PolyQ(std::move(v));
}

PolyQ PolyQ::monic() const {
  if (is_zero()) return *this;
  return *this * (Rational(1) / leading());
}

std::pair<PolyQ, PolyQ> PolyQ::divmod(const PolyQ& divisor) const {
  if (divisor.is_zero()) throw std::invalid_argument("division by zero polynomial");
  PolyQ rem = *this;
  int dd = divisor.degree();
  if (rem.degree() < dd) return {PolyQ(), rem};
  std::vector<Rational> q(rem.degree() - dd + 1, Rational(0));
  while (!rem.is_zero() && rem.degree() >= dd) {
    int k = rem.degree() - dd;
    Rational f = rem.leading() / divisor.leading();
    q[k] = f;
    rem = rem - PolyQ::monomial(k, f) * divisor;
  }
  return {PolyQ(std::move(q)), rem};
}

bool PolyQ::divisible_by(const PolyQ& divisor) const {
  return divmod(divisor).second.is_zero();
}

int PolyQ::root_multiplicity(const Rational& a) const {
  if (is_zero()) throw std::domain_error("zero polynomial");
  PolyQ linear({-a, Rational(1)});
  PolyQ p = *this;
  int m = 0;
  while (p(a) == 0) {
    p = p.divmod(linear).first;
    ++m;
  }
  return m;
}

PolyQ poly_gcd(PolyQ a, PolyQ b) {
  while (!b.is_zero()) {
    PolyQ r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

std::vector<std::pair<PolyQ, int>> squarefree_decomposition(const PolyQ& p) {
  std::vector<std::pair<PolyQ, int>> out;
  if (p.degree() <= 0) return out;
  // Yun's algorithm over a characteristic-zero field.
  PolyQ a = p.monic();
  PolyQ g = poly_gcd(a, a.derivative());
  if (g.degree() == 0) {
    out.emplace_back(a, 1);
    return out;
  }
  PolyQ w = a.divmod(g).first;
  int k = 1;
  while (w.degree() > 0) {
    PolyQ y = poly_gcd(w, g);
    PolyQ f = w.divmod(y).first;
    if (f.degree() > 0) out.emplace_back(f.monic(), k);
    w = y;
    g = g.divmod(y).first;
    ++k;
  }
  return out;
}

namespace {

int sign_variations(const std::vector<PolyQ>& chain, const Rational& x) {
  int v = 0, prev = 0;
  for (const auto& p : chain) {
    int s = sgn(p(x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

std::vector<PolyQ> sturm_chain(const PolyQ& p) {
  std::vector<PolyQ> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    const PolyQ& a = chain[chain.size() - 2];
    const PolyQ& b = chain.back();
    PolyQ r = a.divmod(b).second;
    chain.push_back(r * Rational(-1));
  }
  chain.pop_back();
  return chain;
}

}  // namespace

int sturm_count_open(const PolyQ& squarefree, const Rational& a,
                     const Rational& b) {
  if (squarefree(a) == 0 || squarefree(b) == 0)
    throw std::invalid_argument("sturm endpoints must not be roots");
  auto chain = sturm_chain(squarefree);
  return sign_variations(chain, a) - sign_variations(chain, b);
}

std::vector<std::pair<Rational, Rational>> isolate_real_roots(
    const PolyQ& squarefree, const Rational& a, const Rational& b,
    const Rational& width) {
  auto chain = sturm_chain(squarefree);
  auto count = [&](const Rational& lo, const Rational& hi) {
    return sign_variations(chain, lo) - sign_variations(chain, hi);
  };
  std::vector<std::pair<Rational, Rational>> out;
  std::vector<std::pair<Rational, Rational>> work{{a, b}};
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    int n = count(lo, hi);
    if (n == 0) continue;
    if (n == 1 && hi - lo <= width) {
      out.emplace_back(lo, hi);
      continue;
    }
    // Pick a split point that is not itself a root so Sturm evaluations stay
    // clean; only finitely many candidates can fail.
    Rational mid = (lo + hi) / 2;
    for (long k = 3; squarefree(mid) == 0; ++k) mid = lo + (hi - lo) * Rational(1, k);
    work.emplace_back(lo, mid);
    work.emplace_back(mid, hi);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

const PolyQ& cyclotomic(int d) {
  static std::map<int, PolyQ> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  if (d < 1) throw std::invalid_argument("cyclotomic index must be positive");
  // x^d - 1 = prod over e | d of Phi_e.
  std::vector<Rational> xn(d + 1, Rational(0));
  xn[0] = -1;
  xn[d] = 1;
  PolyQ p{std::move(xn)};
  for (int e = 1; e < d; ++e) {
    if (d % e == 0) p = p.divmod(cyclotomic(e)).first;
  }
  return cache.emplace(d, std::move(p)).first->second;
}

int euler_phi(int d) {
  int r = d;
  for (int p = 2; p * p <= d; ++p) {
    if (d % p == 0) {
      r -= r / p;
      while (d % p == 0) d /= p;
    }
  }
  if (d > 1) r -= r / d;
  return r;
}

bool is_self_reciprocal(const PolyQ& p) {
  int n = p.degree();
  if (n < 0) return false;
  for (int i = 0; i <= n; ++i)
    if (p.coeff(i) != p.coeff(n - i)) return false;
  return true;
}

PolyQ reciprocal_transform(const PolyQ& p) {
  int n = p.degree();
  if (n < 0 || n % 2 != 0 || !is_self_reciprocal(p))
    throw std::invalid_argument("reciprocal transform needs a self-reciprocal even-degree polynomial");
  int m = n / 2;
  // x^k + x^-k as a polynomial in y = x + 1/x: T_0 = 2, T_1 = y,
  // T_k = y*T_{k-1} - T_{k-2}.
  std::vector<PolyQ> T(m + 1);
  T[0] = PolyQ::constant(Rational(2));
  if (m >= 1) T[1] = PolyQ::monomial(1);
  for (int k = 2; k <= m; ++k) T[k] = PolyQ::monomial(1) * T[k - 1] - T[k - 2];
  PolyQ q = PolyQ::constant(p.coeff(m));
  for (int k = 1; k <= m; ++k) q = q + T[k] * p.coeff(m + k);
  return q;
}

}  // namespace maslov
