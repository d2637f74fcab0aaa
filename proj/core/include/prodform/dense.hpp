#pragma once

// Small dense real linear algebra used by the solver and the word-series
// projections.  Sizes are tiny (tens of columns), so plain loops are enough.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace prodform {

/// Row-major dense matrix.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> a_;
};

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
T norm2(const std::vector<T>& a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

template <class T>
T max_abs(const std::vector<T>& a) {
  using std::abs;
  T m(0);
  for (const T& v : a) {
    T x = abs(v);
    if (x > m) m = x;
  }
  return m;
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting.  Throws std::runtime_error when a pivot vanishes.
template <class T>
std::vector<T> solve_linear(DenseMatrix<T> a, std::vector<T> b) {
  using std::abs;
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_linear: shape mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(a(i, k)) > abs(a(piv, k))) piv = i;
    if (a(piv, k) == T(0)) throw std::runtime_error("solve_linear: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      T f = a(i, k) / a(k, k);
      if (f == T(0)) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<T> x(n, T(0));
  for (std::size_t k = n; k-- > 0;) {
    T s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

/// Thin QR factorisation by modified Gram-Schmidt with one reorthogonalisation
/// pass.  Columns of `q` are orthonormal; `r` is upper triangular.  Columns that
/// are numerically dependent on earlier ones get a zero column in `q`.
template <class T>
struct ThinQr {
  DenseMatrix<T> q;
  DenseMatrix<T> r;
  std::vector<bool> independent;

  explicit ThinQr(const DenseMatrix<T>& a, const T& rank_tol = T(0)) : q(a), r(a.cols(), a.cols()) {
    using std::sqrt;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    independent.assign(n, true);
    for (std::size_t j = 0; j < n; ++j) {
      T original(0);
      for (std::size_t i = 0; i < m; ++i) original += q(i, j) * q(i, j);
      original = sqrt(original);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t p = 0; p < j; ++p) {
          if (!independent[p]) continue;
          T s(0);
          for (std::size_t i = 0; i < m; ++i) s += q(i, p) * q(i, j);
          r(p, j) += s;
          for (std::size_t i = 0; i < m; ++i) q(i, j) -= s * q(i, p);
        }
      }
      T nrm(0);
      for (std::size_t i = 0; i < m; ++i) nrm += q(i, j) * q(i, j);
      nrm = sqrt(nrm);
      if (nrm == T(0) || nrm <= rank_tol * original) {
        independent[j] = false;
        for (std::size_t i = 0; i < m; ++i) q(i, j) = T(0);
        continue;
      }
      r(j, j) = nrm;
      for (std::size_t i = 0; i < m; ++i) q(i, j) /= nrm;
    }
  }

  /// Coefficients of the least-squares fit of `b` on the independent columns
  /// (dependent columns get coefficient 0).
  std::vector<T> solve(const std::vector<T>& b) const {
    const std::size_t m = q.rows();
    const std::size_t n = q.cols();
    std::vector<T> qtb(n, T(0));
    for (std::size_t j = 0; j < n; ++j) {
      if (!independent[j]) continue;
      for (std::size_t i = 0; i < m; ++i) qtb[j] += q(i, j) * b[i];
    }
    std::vector<T> x(n, T(0));
    for (std::size_t k = n; k-- > 0;) {
      if (!independent[k]) continue;
      T s = qtb[k];
      for (std::size_t j = k + 1; j < n; ++j)
        if (independent[j]) s -= r(k, j) * x[j];
      x[k] = s / r(k, k);
    }
    return x;
  }

  /// b minus its orthogonal projection onto the column space.
  std::vector<T> residual(std::vector<T> b) const {
    const std::size_t m = q.rows();
    for (std::size_t j = 0; j < q.cols(); ++j) {
      if (!independent[j]) continue;
      T s(0);
      for (std::size_t i = 0; i < m; ++i) s += q(i, j) * b[i];
      for (std::size_t i = 0; i < m; ++i) b[i] -= s * q(i, j);
    }
    return b;
  }
};

}  // namespace prodform
