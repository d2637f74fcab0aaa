#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "prodform/catalog.hpp"
#include "prodform/order_conditions.hpp"
#include "prodform/word_series.hpp"

using namespace prodform;

namespace {

template <class T>
double worst(const std::vector<T>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(to_double(x)));
  return m;
}

}  // namespace

TEST(OrderConditions, BaseCase) {
  const auto c = eval_conditions<double>({1.0}, 10);
  EXPECT_EQ(c.values.A1, 1.0);
  EXPECT_EQ(c.values.A3, 1.0);
  EXPECT_EQ(c.values.A5, 1.0);
  EXPECT_EQ(c.values.A9, 1.0);
  EXPECT_EQ(c.values.B5, 0.0);
  EXPECT_EQ(c.values.C7, 0.0);
  EXPECT_EQ(c.values.E9, 0.0);
}

TEST(OrderConditions, B5ForOneStage) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 10; ++i) {
    const double w0 = u(rng), w1 = u(rng);
    const auto c = eval_conditions<double>({w0, w1}, 6);
    const double b5 = (w0 * w0 * w1 * w1 * w1 - w1 * w1 * w0 * w0 * w0 + w0 * std::pow(w1, 4) - std::pow(w0, 4) * w1) / 6;
    EXPECT_NEAR(c.values.B5, b5, 1e-13);
    EXPECT_NEAR(c.values.A1, w0 + 2 * w1, 1e-14);
    EXPECT_NEAR(c.values.A3, std::pow(w0, 3) + 2 * std::pow(w1, 3), 1e-13);
  }
}

TEST(OrderConditions, JacobiRelation) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  std::vector<double> w(6);
  for (auto& v : w) v = nd(rng);
  const auto c = eval_conditions(w, 10);
  EXPECT_NEAR(c.values.C9_2, c.values.C9_1 + c.values.C9_3, 1e-10);
}

TEST(OrderConditions, IndependentCounts) {
  EXPECT_EQ(plain_condition_count(4), 1);
  EXPECT_EQ(plain_condition_count(6), 3);
  EXPECT_EQ(plain_condition_count(8), 7);
  EXPECT_EQ(plain_condition_count(10), 15);
  EXPECT_EQ(recursion_residual<double>({0.3, 0.2, -0.1}, 10).size(), 15u);
  EXPECT_THROW(eval_conditions<double>({1.0}, 7), std::invalid_argument);
}

TEST(OrderConditions, SolutionsOfOrderSix) {
  const auto c = eval_order6<Quad>(catalog_entry("Y6m3a").kernel());
  EXPECT_LT(worst(c.independent()), 1e-25);
}

TEST(OrderConditions, TenthOrderCatalogEntries) {
  for (const char* label : {"Y10m15", "Y10m16", "Y10m17", "Y10m18", "Y10m18b"}) {
    const auto c = eval_order10<Quad>(catalog_entry(label).kernel());
    EXPECT_EQ(c.independent().size(), 16u);
    EXPECT_LT(worst(c.independent()), 1e-20) << label;
  }
}

TEST(OrderConditions, EighthOrderWordSeries) {
  const auto& kl = catalog_entry("KL8s15").kernel();
  EXPECT_LT(worst(condition_vector<Quad>(kl, 8)), 1e-25);
  const auto s2 = StageCoefficients::from_values<double>({1.0}, 2, "S2");
  EXPECT_GT(worst(condition_vector<double>(s2, 4)), 1e-3);
}

TEST(OrderConditions, ProcessedKernelNeedsProcessor) {
  const auto& e = catalog_entry("YP8m8L");
  EXPECT_GT(worst(condition_vector<Quad>(e.processed->kernel, 8)), 1e-6);
  EXPECT_LT(worst(kernel_condition_vector<Quad>(e.processed->kernel, 8)), 1e-25);
  EXPECT_LT(worst(condition_vector<Quad>(*e.processed, 8)), 1e-20);
}

// Recursion and word series are two routes to the same zero set: wherever the
// recursion vanishes the word-series residual vanishes too, and a perturbation
// moves both away from zero.
TEST(OrderConditions, RecursionAgreesWithWordSeries) {
  for (const char* label : {"KL8s15", "Y8m10", "Y10m16"}) {
    const auto& f = catalog_entry(label).kernel();
    const int k = catalog_entry(label).order;
    EXPECT_LT(worst(eval_conditions(f.values<Quad>(), k).independent()), 1e-20) << label;
    EXPECT_LT(worst(residual(expand<Quad>(f), k)), 1e-20) << label;

    auto w = f.values<double>();
    w[1] += 1e-4;
    const double rec = worst(eval_conditions(w, k).independent());
    const double ws = worst(residual(expand_weights(w, 1.0), k));
    EXPECT_GT(rec, 1e-7) << label;
    EXPECT_GT(ws, 1e-7) << label;
  }
}
