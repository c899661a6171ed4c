#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "maslov/numeric.hpp"
#include "maslov/polynomial.hpp"

namespace maslov {

template <typename T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  Matrix transpose() const {
    Matrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix m(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const T& v = (*this)(i, k);
        if (v == T(0)) continue;
        for (int j = 0; j < o.cols_; ++j) m(i, j) += v * o(k, j);
      }
    return m;
  }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix m(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
    return m;
  }

  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix m(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
    return m;
  }

  Matrix operator*(const T& s) const {
    Matrix m = *this;
    for (auto& x : m.a_) x = x * s;
    return m;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  int rows_, cols_;
  std::vector<T> a_;
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("matrix shape mismatch");
  }
};

using MatQ = Matrix<Rational>;
using MatD = Matrix<double>;

// J on R^{2n} in (A B / C D) block coordinates: [[0, -I], [I, 0]].
MatQ standard_J(int half_order);

bool is_symplectic_exact(const MatQ& m);
bool is_symplectic_float(const MatD& m, double tol = 1e-9);

MatD to_float(const MatQ& m);

// Interleaved direct sum: (A1 B1 / C1 D1) diamond (A2 B2 / C2 D2) has block
// rows (A1 0 B1 0 / 0 A2 0 B2 / C1 0 D1 0 / 0 C2 0 D2).
template <typename T>
Matrix<T> diamond_product(const Matrix<T>& m1, const Matrix<T>& m2) {
  int n1 = m1.rows() / 2, n2 = m2.rows() / 2;
  if (m1.rows() != 2 * n1 || m1.cols() != m1.rows() || m2.rows() != 2 * n2 ||
      m2.cols() != m2.rows())
    throw std::invalid_argument("diamond needs even-order square matrices");
  Matrix<T> m(2 * (n1 + n2), 2 * (n1 + n2));
  auto put = [&](int r0, int c0, const Matrix<T>& src, int sr, int sc, int n) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(r0 + i, c0 + j) = src(sr + i, sc + j);
  };
  int n = n1 + n2;
  put(0, 0, m1, 0, 0, n1);          // A1
  put(0, n, m1, 0, n1, n1);         // B1
  put(n, 0, m1, n1, 0, n1);         // C1
  put(n, n, m1, n1, n1, n1);        // D1
  put(n1, n1, m2, 0, 0, n2);        // A2
  put(n1, n + n1, m2, 0, n2, n2);   // B2
  put(n + n1, n1, m2, n2, 0, n2);   // C2
  put(n + n1, n + n1, m2, n2, n2, n2);  // D2
  return m;
}

// Exact rank and kernel over Q.
int rank_exact(MatQ m);
std::vector<std::vector<Rational>> kernel_basis_exact(MatQ m);

// Characteristic polynomial, exact (Faddeev-LeVerrier).
PolyQ char_poly(const MatQ& m);

// Signature (positives, negatives) of a symmetric rational matrix, computed
// by congruence reduction.
std::pair<int, int> signature_exact(MatQ g);

// A real symplectic matrix with either exact rational or double entries.
// Symplecticity is checked on construction: exactly for rational entries,
// within tol for float entries.
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(MatQ m);
  explicit SymplecticMatrix(MatD m, double tol = 1e-9);

  bool is_exact() const { return std::holds_alternative<MatQ>(m_); }
  int half_order() const { return half_; }
  int order() const { return 2 * half_; }

  const MatQ& exact() const;
  const MatD& floating() const;
  MatD float_view() const;  // entries as doubles, any substrate

  SymplecticMatrix transpose() const;
  bool operator==(const SymplecticMatrix& o) const { return m_ == o.m_; }

 private:
  std::variant<MatQ, MatD> m_;
  int half_;
};

SymplecticMatrix diamond(const SymplecticMatrix& a, const SymplecticMatrix& b);

}  // namespace maslov
