#pragma once

// Small dense complex linear algebra for the error benchmarks.  The scalar
// type is a template parameter so the same code runs in double and Quad.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace prodform {

template <class T>
struct Cx {
  T re{};
  T im{};

  Cx() = default;
  Cx(const T& r) : re(r) {}  // NOLINT(google-explicit-constructor)
  Cx(const T& r, const T& i) : re(r), im(i) {}

  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx& operator-=(const Cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend Cx operator+(Cx a, const Cx& b) { return a += b; }
  friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
  friend Cx operator-(const Cx& a) { return Cx(-a.re, -a.im); }
  friend Cx operator*(const Cx& a, const Cx& b) { return Cx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re); }
  friend Cx operator*(const Cx& a, const T& s) { return Cx(a.re * s, a.im * s); }
  friend Cx operator*(const T& s, const Cx& a) { return Cx(a.re * s, a.im * s); }
  friend Cx operator/(const Cx& a, const Cx& b) {
    const T d = b.re * b.re + b.im * b.im;
    return Cx((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
  }
  friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
};

template <class T>
Cx<T> conj(const Cx<T>& z) {
  return Cx<T>(z.re, -z.im);
}

template <class T>
T norm_sq(const Cx<T>& z) {
  return z.re * z.re + z.im * z.im;
}

template <class T>
T abs(const Cx<T>& z) {
  using std::sqrt;
  return T(sqrt(norm_sq(z)));
}

template <class T>
T arg(const Cx<T>& z) {
  using std::atan2;
  return T(atan2(z.im, z.re));
}

/// e^{i theta}
template <class T>
Cx<T> expi(const T& theta) {
  using std::cos;
  using std::sin;
  return Cx<T>(T(cos(theta)), T(sin(theta)));
}

/// Square complex matrix, row-major.
template <class T>
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Cx<T>(T(1));
    return m;
  }

  std::size_t size() const { return n_; }
  Cx<T>& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Cx<T>& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  CMatrix adjoint() const {
    CMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(j, i) = conj((*this)(i, j));
    return m;
  }

  CMatrix& operator+=(const CMatrix& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  CMatrix& operator*=(const T& s) {
    for (auto& z : a_) z = z * s;
    return *this;
  }
  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("CMatrix: dimension mismatch");
    const std::size_t n = a.n_;
    CMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const Cx<T> aik = a(i, k);
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  /// this * diag(d)
  CMatrix& scale_columns(const std::vector<Cx<T>>& d) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) (*this)(i, j) = (*this)(i, j) * d[j];
    return *this;
  }

  /// Frobenius norm.
  T frobenius() const {
    using std::sqrt;
    T s(0);
    for (const auto& z : a_) s += norm_sq(z);
    return T(sqrt(s));
  }

  T max_abs() const {
    T m(0);
    for (const auto& z : a_) m = std::max(m, abs(z));
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Cx<T>> a_;
};

template <class T>
struct HermitianEigen {
  std::vector<T> values;  ///< ascending
  CMatrix<T> vectors;     ///< columns are eigenvectors
};

/// Cyclic complex Jacobi for Hermitian matrices.  Only the Hermitian part of
/// the input is used.
template <class T>
HermitianEigen<T> hermitian_eigen(const CMatrix<T>& h, int max_sweeps = 60) {
  using std::atan2;
  using std::cos;
  using std::sin;
  using std::sqrt;
  const std::size_t n = h.size();
  CMatrix<T> a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (h(i, j) + conj(h(j, i))) * T(0.5);
  for (std::size_t i = 0; i < n; ++i) a(i, i).im = T(0);
  CMatrix<T> v = CMatrix<T>::identity(n);
  const T eps = std::numeric_limits<T>::epsilon();
  const T scale = a.frobenius();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    T off(0);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += norm_sq(a(p, q));
    if (sqrt(off) <= eps * scale * T(1e-2) || off == T(0)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T mag = abs(a(p, q));
        if (mag == T(0)) continue;
        const Cx<T> ph = a(p, q) * (T(1) / mag);  // e^{i phi}
        const T theta = T(0.5) * T(atan2(T(-2) * mag, a(p, p).re - a(q, q).re));
        const T c = T(cos(theta));
        const T s = T(sin(theta));
        // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on (p, q)
        const Cx<T> jpp(c), jpq(s);
        const Cx<T> jqp = conj(ph) * (-s);
        const Cx<T> jqq = conj(ph) * c;
        for (std::size_t i = 0; i < n; ++i) {
          const Cx<T> aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * jpp + aiq * jqp;
          a(i, q) = aip * jpq + aiq * jqq;
          const Cx<T> vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * jpp + viq * jqp;
          v(i, q) = vip * jpq + viq * jqq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Cx<T> apj = a(p, j), aqj = a(q, j);
          a(p, j) = conj(jpp) * apj + conj(jqp) * aqj;
          a(q, j) = conj(jpq) * apj + conj(jqq) * aqj;
        }
        a(p, q) = Cx<T>();
        a(q, p) = Cx<T>();
        a(p, p).im = T(0);
        a(q, q).im = T(0);
      }
    }
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return a(x, x).re < a(y, y).re; });
  HermitianEigen<T> out;
  out.vectors = CMatrix<T>(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values.push_back(a(idx[j], idx[j]).re);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, idx[j]);
  }
  return out;
}

/// Largest singular value, sqrt(lambda_max(M^dagger M)).
template <class T>
T spectral_norm(const CMatrix<T>& m) {
  using std::sqrt;
  auto e = hermitian_eigen(m.adjoint() * m);
  T top = e.values.empty() ? T(0) : e.values.back();
  return top > T(0) ? T(sqrt(top)) : T(0);
}

/// Solves X A = B for X (right division) by Gaussian elimination with partial pivoting.
template <class T>
CMatrix<T> right_divide(const CMatrix<T>& b, const CMatrix<T>& a) {
  // X A = B  <=>  A^dagger X^dagger = B^dagger
  const std::size_t n = a.size();
  CMatrix<T> m = a.adjoint();
  CMatrix<T> r = b.adjoint();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (norm_sq(m(i, k)) > norm_sq(m(piv, k))) piv = i;
    if (norm_sq(m(piv, k)) == T(0)) throw std::runtime_error("right_divide: singular matrix");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(k, j), m(piv, j));
        std::swap(r(k, j), r(piv, j));
      }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Cx<T> f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      for (std::size_t j = 0; j < n; ++j) r(i, j) -= f * r(k, j);
    }
  }
  CMatrix<T> x(n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t k = n; k-- > 0;) {
      Cx<T> s = r(k, col);
      for (std::size_t j = k + 1; j < n; ++j) s -= m(k, j) * x(j, col);
      x(k, col) = s / m(k, k);
    }
  return x.adjoint();
}

}  // namespace prodform
