#include "maslov/matrix.hpp"

#include <cmath>

namespace maslov {

MatQ standard_J(int half_order) {
  MatQ j(2 * half_order, 2 * half_order);
  for (int i = 0; i < half_order; ++i) {
    j(i, half_order + i) = Rational(-1);
    j(half_order + i, i) = Rational(1);
  }
  return j;
}

bool is_symplectic_exact(const MatQ& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) return false;
  MatQ j = standard_J(m.rows() / 2);
  return m.transpose() * j * m == j;
}

bool is_symplectic_float(const MatD& m, double tol) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) return false;
  int n = m.rows() / 2;
  MatD j(m.rows(), m.rows());
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = -1.0;
    j(n + i, i) = 1.0;
  }
  MatD r = m.transpose() * j * m - j;
  for (int i = 0; i < r.rows(); ++i)
    for (int k = 0; k < r.cols(); ++k)
      if (std::fabs(r(i, k)) > tol) return false;
  return true;
}

MatD to_float(const MatQ& m) {
  MatD f(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) f(i, j) = m(i, j).get_d();
  return f;
}

int rank_exact(MatQ m) {
  int rank = 0;
  int rows = m.rows(), cols = m.cols();
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int c = 0; c < cols; ++c) std::swap(m(pivot, c), m(rank, c));
    Rational inv = Rational(1) / m(rank, col);
    for (int c = col; c < cols; ++c) m(rank, c) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (int c = col; c < cols; ++c) m(r, c) -= f * m(rank, c);
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Rational>> kernel_basis_exact(MatQ m) {
  int rows = m.rows(), cols = m.cols();
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int c = 0; c < cols; ++c) std::swap(m(pivot, c), m(rank, c));
    Rational inv = Rational(1) / m(rank, col);
    for (int c = col; c < cols; ++c) m(rank, c) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (int c = col; c < cols; ++c) m(r, c) -= f * m(rank, c);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (int r = 0; r < rank; ++r) v[pivot_col[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

PolyQ char_poly(const MatQ& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("char_poly needs a square matrix");
  int k = m.rows();
  std::vector<Rational> c(k + 1, Rational(0));
  c[k] = 1;
  MatQ a = m;
  for (int j = 1; j <= k; ++j) {
    if (j > 1) {
      // a <- m (a + c_{k-j+1} I)
      MatQ t = a;
      for (int i = 0; i < k; ++i) t(i, i) += c[k - j + 1];
      a = m * t;
    }
    Rational tr(0);
    for (int i = 0; i < k; ++i) tr += a(i, i);
    c[k - j] = -tr / Rational(j);
  }
  return PolyQ(std::move(c));
}

std::pair<int, int> signature_exact(MatQ g) {
  // Symmetric congruence reduction. Off-diagonal pivots are absorbed by the
  // rank-two identity 2ab = (a+b)^2/2 - (a-b)^2/2 via a row/column update.
  int n = g.rows();
  if (g.cols() != n) throw std::invalid_argument("signature needs a square matrix");
  int pos = 0, neg = 0;
  std::vector<bool> done(n, false);
  for (int step = 0; step < n; ++step) {
    int p = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && g(i, i) != 0) {
        p = i;
        break;
      }
    if (p < 0) {
      // All remaining diagonal entries vanish; find an off-diagonal entry.
      int a = -1, b = -1;
      for (int i = 0; i < n && a < 0; ++i) {
        if (done[i]) continue;
        for (int j = i + 1; j < n; ++j) {
          if (done[j]) continue;
          if (g(i, j) != 0) {
            a = i;
            b = j;
            break;
          }
        }
      }
      if (a < 0) break;  // remaining block is zero
      // Row/column update x_a <- x_a + x_b turns the diagonal nonzero.
      for (int c = 0; c < n; ++c) g(a, c) += g(b, c);
      for (int r = 0; r < n; ++r) g(r, a) += g(r, b);
      p = a;
    }
    Rational d = g(p, p);
    if (d > 0)
      ++pos;
    else
      ++neg;
    for (int r = 0; r < n; ++r) {
      if (r == p || done[r] || g(r, p) == 0) continue;
      Rational f = g(r, p) / d;
      for (int c = 0; c < n; ++c) g(r, c) -= f * g(p, c);
      for (int c = 0; c < n; ++c) g(c, r) -= f * g(c, p);
    }
    done[p] = true;
  }
  return {pos, neg};
}

SymplecticMatrix::SymplecticMatrix(MatQ m) : m_(std::move(m)) {
  const MatQ& q = std::get<MatQ>(m_);
  if (!is_symplectic_exact(q))
    throw std::invalid_argument("matrix is not symplectic");
  half_ = q.rows() / 2;
}

SymplecticMatrix::SymplecticMatrix(MatD m, double tol) : m_(std::move(m)) {
  const MatD& d = std::get<MatD>(m_);
  if (!is_symplectic_float(d, tol))
    throw std::invalid_argument("matrix is not symplectic within tolerance");
  half_ = d.rows() / 2;
}

const MatQ& SymplecticMatrix::exact() const {
  if (!is_exact()) throw std::domain_error("matrix has float entries");
  return std::get<MatQ>(m_);
}

const MatD& SymplecticMatrix::floating() const {
  if (is_exact()) throw std::domain_error("matrix has exact entries");
  return std::get<MatD>(m_);
}

MatD SymplecticMatrix::float_view() const {
  return is_exact() ? to_float(std::get<MatQ>(m_)) : std::get<MatD>(m_);
}

SymplecticMatrix SymplecticMatrix::transpose() const {
  if (is_exact()) return SymplecticMatrix(std::get<MatQ>(m_).transpose());
  return SymplecticMatrix(std::get<MatD>(m_).transpose());
}

SymplecticMatrix diamond(const SymplecticMatrix& a, const SymplecticMatrix& b) {
  if (a.is_exact() && b.is_exact())
    return SymplecticMatrix(diamond_product(a.exact(), b.exact()));
  return SymplecticMatrix(diamond_product(a.float_view(), b.float_view()));
}

}  // namespace maslov
