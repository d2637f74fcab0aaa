#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace prodform {

/// One factor exp(coeff * t * H_term) of a product formula.
template <class T>
struct Exponential {
  int term = 0;
  T coeff{};
};

/// Ordered, merged list of exponentials.  Entries are applied left to right,
/// i.e. the first entry is the leftmost factor of the operator product.
///
/// Invariant: no two adjacent entries share a term and no coefficient is zero.
/// `push` maintains it by merging into the last entry and popping zeros, which
/// also collapses cascades such as `a X, b Y, -b Y, -a X` to nothing.
template <class T>
class ExponentialSequence {
 public:
  explicit ExponentialSequence(int num_terms = 2) : num_terms_(num_terms) {
    if (num_terms < 1) throw std::invalid_argument("ExponentialSequence: need at least one term");
  }

  int num_terms() const { return num_terms_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Exponential<T>>& entries() const { return entries_; }
  const Exponential<T>& operator[](std::size_t i) const { return entries_[i]; }

  void push(int term, const T& coeff) {
    if (term < 0 || term >= num_terms_) throw std::out_of_range("ExponentialSequence: bad term index");
    if (!entries_.empty() && entries_.back().term == term) {
      entries_.back().coeff += coeff;
      if (entries_.back().coeff == T(0)) entries_.pop_back();
      return;
    }
    if (coeff == T(0)) return;
    entries_.push_back({term, coeff});
  }

  void append(const ExponentialSequence& other) {
    if (other.num_terms_ != num_terms_) throw std::invalid_argument("ExponentialSequence: term count mismatch");
    for (const auto& e : other.entries_) push(e.term, e.coeff);
  }

  /// Appends the symmetric second-order block S2(c) for `num_terms` terms:
  /// H_1..H_{J-1} with c/2, H_J with c, then H_{J-1}..H_1 with c/2.
  void push_s2(const T& c) {
    const int j = num_terms_;
    if (j == 1) {
      push(0, c);
      return;
    }
    T half = c / T(2);
    for (int i = 0; i + 1 < j; ++i) push(i, half);
    push(j - 1, c);
    for (int i = j - 2; i >= 0; --i) push(i, half);
  }

  /// Reversed order with negated coefficients: the exact inverse product.
  ExponentialSequence inverse() const {
    ExponentialSequence out(num_terms_);
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) out.push(it->term, -it->coeff);
    return out;
  }

  ExponentialSequence scaled(const T& s) const {
    ExponentialSequence out(num_terms_);
    for (const auto& e : entries_) out.push(e.term, e.coeff * s);
    return out;
  }

  T coefficient_sum(int term) const {
    T s(0);
    for (const auto& e : entries_)
      if (e.term == term) s += e.coeff;
    return s;
  }

  bool is_palindromic(const T& tol) const {
    using std::abs;
    const std::size_t n = entries_.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
      const auto& a = entries_[i];
      const auto& b = entries_[n - 1 - i];
      if (a.term != b.term || abs(a.coeff - b.coeff) > tol) return false;
    }
    return true;
  }

  template <class U>
  ExponentialSequence<U> cast() const {
    ExponentialSequence<U> out(num_terms_);
    for (const auto& e : entries_) out.push(e.term, static_cast<U>(e.coeff));
    return out;
  }

 private:
  int num_terms_;
  std::vector<Exponential<T>> entries_;
};

}  // namespace prodform
