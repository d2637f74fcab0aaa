#pragma once

// Truncated power series in two non-commuting letters X and Y.
//
// A word is stored as an integer with a leading marker bit followed by one bit
// per letter (X = 0, Y = 1), so "" -> 1, "X" -> 2, "Y" -> 3, "XY" -> 5.  A
// series capped at order k is a dense array over all codes 1 .. 2^{k+1}-1.
// Word length doubles as the power of t, so the exact flow exp((X+Y)t) has
// coefficient 1/L! on every word of length L.

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prodform/dense.hpp"
#include "prodform/sequence.hpp"

namespace prodform {

enum class Letter : std::uint8_t { X = 0, Y = 1 };

inline constexpr int kMaxOrderCap = 20;

/// Number of words of length 0..k.
constexpr std::size_t word_count(int k) { return (std::size_t{2} << k) - 1; }

class WordIndex {
 public:
  constexpr WordIndex() = default;
  explicit constexpr WordIndex(std::uint32_t code) : code_(code) {
    if (code == 0) throw std::invalid_argument("WordIndex: code must be positive");
  }

  static WordIndex encode(std::span<const Letter> letters) {
    if (letters.size() > kMaxOrderCap) throw std::length_error("WordIndex: word too long");
    std::uint32_t c = 1;
    for (Letter l : letters) c = (c << 1U) | static_cast<std::uint32_t>(l);
    return WordIndex(c);
  }

  /// Parses text such as "XYX"; "" and "I" give the empty word.
  static WordIndex parse(std::string_view text) {
    std::vector<Letter> letters;
    if (text == "I") return WordIndex();
    for (char ch : text) {
      if (ch == 'X') {
        letters.push_back(Letter::X);
      } else if (ch == 'Y') {
        letters.push_back(Letter::Y);
      } else {
        throw std::invalid_argument("WordIndex: letters must be X or Y");
      }
    }
    return encode(letters);
  }

  std::vector<Letter> decode() const {
    const int n = length();
    std::vector<Letter> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = static_cast<Letter>((code_ >> (n - 1 - i)) & 1U);
    return out;
  }

  std::string to_string() const {
    if (code_ == 1) return "I";
    std::string s;
    for (Letter l : decode()) s.push_back(l == Letter::X ? 'X' : 'Y');
    return s;
  }

  constexpr std::uint32_t code() const { return code_; }
  constexpr int length() const { return std::bit_width(code_) - 1; }
  constexpr std::size_t slot() const { return code_ - 1; }

  friend constexpr bool operator==(WordIndex a, WordIndex b) { return a.code_ == b.code_; }

 private:
  std::uint32_t code_ = 1;
};

template <class T>
class WordPoly {
 public:
  explicit WordPoly(int order_cap) : k_(order_cap) {
    if (order_cap < 0 || order_cap > kMaxOrderCap) throw std::out_of_range("WordPoly: order cap out of range");
    c_.assign(word_count(order_cap), T(0));
  }

  static WordPoly identity(int order_cap) {
    WordPoly p(order_cap);
    p.c_[0] = T(1);
    return p;
  }

  int order_cap() const { return k_; }
  std::size_t size() const { return c_.size(); }
  const std::vector<T>& coeffs() const { return c_; }

  T& operator[](WordIndex w) { return c_.at(w.slot()); }
  const T& operator[](WordIndex w) const { return c_.at(w.slot()); }
  T& at_code(std::uint32_t code) { return c_[code - 1]; }
  const T& at_code(std::uint32_t code) const { return c_[code - 1]; }

  WordPoly& operator+=(const WordPoly& o) {
    check_cap(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  WordPoly& operator-=(const WordPoly& o) {
    check_cap(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  WordPoly& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend WordPoly operator+(WordPoly a, const WordPoly& b) { return a += b; }
  friend WordPoly operator-(WordPoly a, const WordPoly& b) { return a -= b; }
  friend WordPoly operator*(WordPoly a, const T& s) { return a *= s; }

  /// Coefficients of words of exactly `degree` letters, in code order.
  std::vector<T> homogeneous(int degree) const {
    const std::size_t lo = std::size_t{1} << degree;
    return std::vector<T>(c_.begin() + static_cast<std::ptrdiff_t>(lo - 1),
                          c_.begin() + static_cast<std::ptrdiff_t>(2 * lo - 1));
  }

  void set_homogeneous(int degree, const std::vector<T>& v) {
    const std::size_t lo = std::size_t{1} << degree;
    if (v.size() != lo) throw std::invalid_argument("WordPoly: homogeneous block size");
    for (std::size_t i = 0; i < lo; ++i) c_[lo - 1 + i] = v[i];
  }

  /// Keeps only the words of exactly `degree` letters.
  WordPoly degree_part(int degree) const {
    WordPoly out(k_);
    if (degree <= k_) out.set_homogeneous(degree, homogeneous(degree));
    return out;
  }

  /// In-place right multiplication by exp(c L), truncated at the order cap.
  /// A word ending in p copies of L receives a[prefix] c^p / p! for each p.
  void right_multiply_exp(Letter letter, const T& c) {
    if (c == T(0)) return;
    std::vector<T> pw(static_cast<std::size_t>(k_) + 1);
    pw[0] = T(1);
    for (int p = 1; p <= k_; ++p) pw[static_cast<std::size_t>(p)] = pw[static_cast<std::size_t>(p - 1)] * c / T(p);
    const std::uint32_t bit = static_cast<std::uint32_t>(letter);
    // Prefixes have smaller codes, so walking downwards reads unmodified values.
    for (std::uint32_t code = static_cast<std::uint32_t>(c_.size()); code >= 2; --code) {
      std::uint32_t w = code;
      int p = 0;
      T acc = c_[code - 1];
      while (w >= 2 && (w & 1U) == bit) {
        w >>= 1U;
        ++p;
        acc += c_[w - 1] * pw[static_cast<std::size_t>(p)];
      }
      c_[code - 1] = acc;
    }
  }

 private:
  void check_cap(const WordPoly& o) const {
    if (o.k_ != k_) throw std::invalid_argument("WordPoly: order cap mismatch");
  }

  int k_;
  std::vector<T> c_;
};

template <class T>
WordPoly<T> exp_letter(Letter letter, const T& c, int k) {
  WordPoly<T> p = WordPoly<T>::identity(k);
  p.right_multiply_exp(letter, c);
  return p;
}

template <class T>
WordPoly<T> multiply(const WordPoly<T>& a, const WordPoly<T>& b) {
  if (a.order_cap() != b.order_cap()) throw std::invalid_argument("multiply: order cap mismatch");
  WordPoly<T> out(a.order_cap());
  const std::uint32_t n = static_cast<std::uint32_t>(a.size());
  for (std::uint32_t w = 1; w <= n; ++w) {
    const int len = std::bit_width(w) - 1;
    T s(0);
    for (int i = 0; i <= len; ++i) {
      const int tail = len - i;
      const std::uint32_t u = w >> tail;
      const std::uint32_t v = (w & ((1U << tail) - 1U)) | (1U << tail);
      const T& au = a.at_code(u);
      if (au == T(0)) continue;
      s += au * b.at_code(v);
    }
    out.at_code(w) = s;
  }
  return out;
}

template <class T>
WordPoly<T> operator*(const WordPoly<T>& a, const WordPoly<T>& b) {
  return multiply(a, b);
}

template <class T>
WordPoly<T> commutator(const WordPoly<T>& a, const WordPoly<T>& b) {
  return multiply(a, b) - multiply(b, a);
}

/// Series of exp((X+Y)t): 1/L! on every word of length L.
template <class T>
WordPoly<T> exact_series(int k) {
  WordPoly<T> p(k);
  T f(1);
  for (int len = 0; len <= k; ++len) {
    if (len > 0) f /= T(len);
    const std::uint32_t lo = 1U << len;
    for (std::uint32_t c = lo; c < 2 * lo; ++c) p.at_code(c) = f;
  }
  return p;
}

/// Ordered product of the exponentials of a two-term sequence (term 0 is X,
/// term 1 is Y), truncated at order k.
template <class T>
WordPoly<T> formula_series(const ExponentialSequence<T>& seq, int k) {
  if (seq.num_terms() != 2) throw std::invalid_argument("formula_series: word series are restricted to two terms");
  WordPoly<T> p = WordPoly<T>::identity(k);
  for (const auto& e : seq.entries()) p.right_multiply_exp(e.term == 0 ? Letter::X : Letter::Y, e.coeff);
  return p;
}

/// formula_series(seq, k) - exact_series(k) as a flat vector indexed by code-1.
template <class T>
std::vector<T> residual(const ExponentialSequence<T>& seq, int k) {
  WordPoly<T> d = formula_series(seq, k) - exact_series<T>(k);
  return d.coeffs();
}

/// log of a series with unit constant term.
template <class T>
WordPoly<T> log_series(const WordPoly<T>& s) {
  using std::abs;
  const int k = s.order_cap();
  WordPoly<T> u = s;
  u.at_code(1) -= T(1);
  if (u.at_code(1) != T(0)) throw std::domain_error("log_series: constant term must be 1");
  WordPoly<T> out(k);
  WordPoly<T> power = u;
  for (int n = 1; n <= k; ++n) {
    T f = T(1) / T(n);
    if (n % 2 == 0) f = -f;
    out += power * f;
    if (n < k) power = multiply(power, u);
  }
  return out;
}

/// exp of a series with zero constant term.
template <class T>
WordPoly<T> exp_series(const WordPoly<T>& z) {
  const int k = z.order_cap();
  if (z.at_code(1) != T(0)) throw std::domain_error("exp_series: constant term must be 0");
  WordPoly<T> out = WordPoly<T>::identity(k);
  WordPoly<T> term = WordPoly<T>::identity(k);
  for (int n = 1; n <= k; ++n) {
    term = multiply(term, z) * (T(1) / T(n));
    out += term;
  }
  return out;
}

/// Lyndon words of exactly n letters over {X < Y}, in lexicographic order.
inline std::vector<std::vector<Letter>> lyndon_words(int n) {
  std::vector<std::vector<Letter>> out;
  if (n <= 0) return out;
  // Duval's generation algorithm.
  std::vector<int> w{-1};
  while (!w.empty()) {
    ++w.back();
    const std::size_t m = w.size();
    if (static_cast<int>(m) == n) {
      std::vector<Letter> word;
      for (int v : w) word.push_back(static_cast<Letter>(v));
      out.push_back(word);
    }
    while (static_cast<int>(w.size()) < n) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == 1) w.pop_back();
  }
  return out;
}

namespace detail {
inline bool is_lyndon(std::span<const Letter> w) {
  const std::size_t n = w.size();
  for (std::size_t i = 1; i < n; ++i) {
    // w must be strictly smaller than each proper rotation / suffix
    std::size_t j = 0;
    while (j < n - i && w[i + j] == w[j]) ++j;
    if (j == n - i) return false;  // suffix is a prefix
    if (w[i + j] < w[j]) return false;
  }
  return true;
}
}  // namespace detail

/// Standard bracketing of a Lyndon word as a homogeneous WordPoly.
template <class T>
WordPoly<T> lyndon_bracket(std::span<const Letter> w, int k) {
  if (w.size() == 1) {
    WordPoly<T> p(k);
    p[WordIndex::encode(w)] = T(1);
    return p;
  }
  // split at the longest proper Lyndon suffix
  for (std::size_t i = 1; i < w.size(); ++i) {
    auto suffix = w.subspan(i);
    if (detail::is_lyndon(suffix)) {
      return commutator(lyndon_bracket<T>(w.subspan(0, i), k), lyndon_bracket<T>(suffix, k));
    }
  }
  throw std::logic_error("lyndon_bracket: not a Lyndon word");
}

/// Basis of the degree-n part of the free Lie algebra on X, Y.
template <class T>
std::vector<WordPoly<T>> lie_basis(int n, int k) {
  std::vector<WordPoly<T>> out;
  for (const auto& w : lyndon_words(n)) out.push_back(lyndon_bracket<T>(w, k));
  return out;
}

/// Reduction of a series modulo conjugation.
///
/// Given a series S = exp(Z), finds a processor exp(p) with p built from Lie
/// elements of degree >= 2 such that exp(p) S exp(-p) is as close as possible
/// to exp(X+Y), degree by degree.  At degree l the component of Z is projected
/// off the image of ad_{X+Y} on degree l-1 Lie elements; ad_{X+Y} is injective
/// there, so the greedy choice is the only one.  The result is the log of the
/// conjugated series minus (X+Y): it vanishes through order k exactly when some
/// conjugation makes S an order-k approximation.
template <class T>
class KernelProjector {
 public:
  explicit KernelProjector(int k) : k_(k) {
    WordPoly<T> h(k);
    h[WordIndex::parse("X")] = T(1);
    h[WordIndex::parse("Y")] = T(1);
    h_ = h;
    for (int l = 3; l <= k; ++l) {
      auto lie = lie_basis<T>(l - 1, k);
      DenseMatrix<T> a(std::size_t{1} << l, lie.size());
      for (std::size_t j = 0; j < lie.size(); ++j) {
        auto col = commutator(h_, lie[j]).homogeneous(l);
        for (std::size_t i = 0; i < col.size(); ++i) a(i, j) = col[i];
      }
      qr_.emplace(l, ThinQr<T>(a));
      lie_.emplace(l, std::move(lie));
    }
  }

  int order_cap() const { return k_; }

  std::vector<T> reduce(const WordPoly<T>& s) const {
    if (s.order_cap() != k_) throw std::invalid_argument("KernelProjector: order cap mismatch");
    WordPoly<T> cur = s;
    for (int l = 3; l <= k_; ++l) {
      WordPoly<T> z = log_series(cur);
      const auto& qr = qr_.at(l);
      auto coef = qr.solve(z.homogeneous(l));
      WordPoly<T> p(k_);
      const auto& lie = lie_.at(l);
      bool any = false;
      for (std::size_t j = 0; j < lie.size(); ++j) {
        if (coef[j] == T(0)) continue;
        p += lie[j] * coef[j];
        any = true;
      }
      if (!any) continue;
      cur = multiply(multiply(exp_series(p), cur), exp_series(p * T(-1)));
    }
    WordPoly<T> z = log_series(cur) - h_;
    return z.coeffs();
  }

 private:
  int k_;
  WordPoly<T> h_{0};
  std::map<int, ThinQr<T>> qr_;
  std::map<int, std::vector<WordPoly<T>>> lie_;
};

/// Convenience wrapper; build a KernelProjector once when evaluating many times.
template <class T>
std::vector<T> kernel_residual(const ExponentialSequence<T>& seq, int k) {
  return KernelProjector<T>(k).reduce(formula_series(seq, k));
}

}  // namespace prodform
