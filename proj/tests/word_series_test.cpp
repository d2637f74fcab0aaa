#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "prodform/catalog.hpp"
#include "prodform/formulas.hpp"
#include "prodform/word_series.hpp"
#include "properties.hpp"

using namespace prodform;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

ExponentialSequence<double> s2_sequence() {
  ExponentialSequence<double> s;
  s.push_s2(1.0);
  return s;
}

}  // namespace

TEST(WordIndex, EncodesWords) {
  EXPECT_EQ(WordIndex::parse("").code(), 1u);
  EXPECT_EQ(WordIndex::parse("I").code(), 1u);
  EXPECT_EQ(WordIndex::parse("X").code(), 2u);
  EXPECT_EQ(WordIndex::parse("Y").code(), 3u);
  EXPECT_EQ(WordIndex::parse("XY").code(), 5u);
  EXPECT_EQ(WordIndex::parse("YX").code(), 6u);
}

TEST(WordIndex, RoundTripsAllShortWords) {
  for (std::uint32_t c = 1; c < 64; ++c) {
    const WordIndex w(c);
    EXPECT_EQ(WordIndex::parse(w.to_string()).code(), c);
    EXPECT_EQ(WordIndex::encode(w.decode()).code(), c);
  }
  EXPECT_EQ(WordIndex::parse("XYX").length(), 3);
  EXPECT_THROW(WordIndex::parse("XZ"), std::invalid_argument);
}

TEST(WordPoly, ExpLetterTaylorCoefficients) {
  const auto e = exp_letter(Letter::X, 1.0, 2);
  EXPECT_EQ(e[WordIndex::parse("I")], 1.0);
  EXPECT_EQ(e[WordIndex::parse("X")], 1.0);
  EXPECT_EQ(e[WordIndex::parse("XX")], 0.5);
  EXPECT_EQ(e[WordIndex::parse("Y")], 0.0);
  EXPECT_EQ(e[WordIndex::parse("XY")], 0.0);

  const auto z = exp_letter(Letter::Y, 0.0, 3);
  EXPECT_EQ(z.coeffs(), WordPoly<double>::identity(3).coeffs());

  const auto h = exp_letter(Letter::X, -0.5, 1);
  EXPECT_EQ(h[WordIndex::parse("X")], -0.5);
}

TEST(WordPoly, MultiplyTruncates) {
  const auto e = exp_letter(Letter::X, 1.0, 1);
  const auto p = e * e;
  EXPECT_EQ(p[WordIndex::parse("I")], 1.0);
  EXPECT_EQ(p[WordIndex::parse("X")], 2.0);
  EXPECT_EQ(p[WordIndex::parse("Y")], 0.0);
}

TEST(WordPoly, IdentityIsNeutral) {
  std::mt19937_64 rng(3);
  const auto p = props::random_poly(rng, 5);
  EXPECT_EQ((p * WordPoly<double>::identity(5)).coeffs(), p.coeffs());
  EXPECT_EQ((WordPoly<double>::identity(5) * p).coeffs(), p.coeffs());
}

TEST(WordPoly, MixedWordCoefficientIsProduct) {
  const double a = 0.7, b = -1.3;
  const auto p = exp_letter(Letter::X, a, 2) * exp_letter(Letter::Y, b, 2);
  EXPECT_DOUBLE_EQ(p[WordIndex::parse("XY")], a * b);
  EXPECT_DOUBLE_EQ(p[WordIndex::parse("YX")], 0.0);
}

TEST(WordPoly, RightMultiplyMatchesMultiply) {
  std::mt19937_64 rng(8);
  const auto p = props::random_poly(rng, 6);
  auto q = p;
  q.right_multiply_exp(Letter::Y, 0.37);
  EXPECT_LT(props::max_abs_diff(q, p * exp_letter(Letter::Y, 0.37, 6)), 1e-14);
}

TEST(WordSeries, ExactSeriesIsInverseFactorial) {
  const auto e = exact_series<double>(5);
  for (std::uint32_t c = 1; c <= word_count(5); ++c) {
    const WordIndex w(c);
    EXPECT_DOUBLE_EQ(e.at_code(c), 1.0 / factorial(w.length())) << w.to_string();
  }
  EXPECT_DOUBLE_EQ(exact_series<double>(3)[WordIndex::parse("XYX")], 1.0 / 6.0);
  EXPECT_EQ(exact_series<double>(0).coeffs(), WordPoly<double>::identity(0).coeffs());
}

TEST(WordSeries, S2MatchesExactToSecondOrder) {
  const auto s = formula_series(s2_sequence(), 2);
  EXPECT_LT(props::max_abs_diff(s, exact_series<double>(2)), 1e-15);
  for (double v : residual(s2_sequence(), 2)) EXPECT_EQ(v, 0.0);
}

TEST(WordSeries, EmptySequenceIsIdentity) {
  ExponentialSequence<double> s;
  s.push_s2(0.0);
  EXPECT_EQ(formula_series(s, 4).coeffs(), WordPoly<double>::identity(4).coeffs());
}

TEST(WordSeries, S2ThirdOrderResidual) {
  const auto s = formula_series(s2_sequence(), 3);
  EXPECT_DOUBLE_EQ(s[WordIndex::parse("XXY")], 1.0 / 8.0);
  const auto r = residual(s2_sequence(), 3);
  EXPECT_NEAR(r[WordIndex::parse("XXY").slot()], 1.0 / 8.0 - 1.0 / 6.0, 1e-15);
}

TEST(WordSeries, S2IsNotFourthOrder) {
  double m = 0;
  for (double v : residual(s2_sequence(), 4)) m = std::max(m, std::abs(v));
  EXPECT_GT(m, 1e-3);
}

TEST(WordSeries, CatalogEntryResidualInQuad) {
  const auto seq = catalog_entry("Y8m10").sequence<Quad>();
  double m = 0;
  for (const auto& v : residual(seq, 8)) m = std::max(m, std::abs(to_double(v)));
  EXPECT_LT(m, 1e-25);
}

TEST(WordSeries, LogExpRoundTrip) {
  const auto s = formula_series(catalog_entry("S4m1").sequence<double>(), 6);
  EXPECT_LT(props::max_abs_diff(exp_series(log_series(s)), s), 1e-12);
}

TEST(WordSeries, KernelResidualVanishesForConjugatedFormula) {
  const auto& e = catalog_entry("YP8m8");
  double m = 0;
  for (const auto& v : kernel_residual(e.kernel_sequence<Quad>(), 8)) m = std::max(m, std::abs(to_double(v)));
  EXPECT_LT(m, 1e-25);
  double plain = 0;
  for (const auto& v : residual(e.kernel_sequence<Quad>(), 8)) plain = std::max(plain, std::abs(to_double(v)));
  EXPECT_GT(plain, 1e-6);
}

TEST(WordSeriesProperties, Associativity) { EXPECT_TRUE(props::word_series_associativity().ok); }
TEST(WordSeriesProperties, Inverse) { EXPECT_TRUE(props::word_series_inverse().ok); }
TEST(WordSeriesProperties, PalindromeEvenOrderCancellation) {
  EXPECT_TRUE(props::palindrome_even_cancellation().ok);
}
