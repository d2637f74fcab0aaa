#include <gtest/gtest.h>

#include <cmath>

#include "prodform/catalog.hpp"
#include "prodform/solver.hpp"

using namespace prodform;

namespace {

constexpr double kS2 = 1.351207191959658;

template <class T>
double worst(const std::vector<T>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(to_double(x)));
  return m;
}

}  // namespace

TEST(LevenbergMarquardt, SolvesSmallSystem) {
  ResidualFn<double> f = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0] - 2, x[0] * x[1] - 1};
  };
  const auto r = levenberg_marquardt(f, {1.0, 1.0}, LmOptions<double>{});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.x[1], 1 / std::sqrt(2.0), 1e-12);
}

TEST(Search, FourthOrderTripleJump) {
  SearchConfig cfg;
  cfg.order = 4;
  cfg.m = 1;
  cfg.restarts = 20;
  const auto res = search(cfg);
  ASSERT_EQ(res.solutions.size(), 1u);
  EXPECT_NEAR(res.solutions[0].w[1], kS2, 1e-12);
  EXPECT_NEAR(res.solutions[0].w[0], 1 - 2 * kS2, 1e-12);
  const auto su = stages_to_weights(suzuki_first_stages<double>(2));
  EXPECT_NEAR(res.solutions[0].w[1], su[1], 1e-12);
}

TEST(Search, SixthOrderThreeSolutions) {
  SearchConfig cfg;
  cfg.order = 6;
  cfg.m = 3;
  cfg.restarts = 200;
  cfg.init_sigma = default_sigma(6);
  const auto res = search(cfg);
  EXPECT_EQ(res.solutions.size(), 3u);
  for (const auto& s : res.solutions) {
    EXPECT_LT(worst(eval_conditions(s.w, 6).independent()), 1e-12);
  }
}

TEST(Search, IndependentOfJobs) {
  SearchConfig cfg;
  cfg.order = 6;
  cfg.m = 3;
  cfg.restarts = 60;
  cfg.jobs = 1;
  const auto a = search(cfg);
  cfg.jobs = 3;
  const auto b = search(cfg);
  ASSERT_EQ(a.solutions.size(), b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) {
    EXPECT_EQ(a.solutions[i].w, b.solutions[i].w);
    EXPECT_EQ(a.solutions[i].restart, b.solutions[i].restart);
  }
  EXPECT_EQ(a.converged, b.converged);
}

TEST(Search, InfeasibleCountGivesNothing) {
  SearchConfig cfg;
  cfg.order = 8;
  cfg.m = 6;
  cfg.restarts = 30;
  EXPECT_TRUE(search(cfg).solutions.empty());
}

TEST(Search, RejectsBadConfig) {
  SearchConfig cfg;
  cfg.order = 7;
  EXPECT_THROW(search(cfg), std::invalid_argument);
  cfg.order = 6;
  cfg.m = 0;
  EXPECT_THROW(search(cfg), std::invalid_argument);
}

TEST(Deduplicate, MergesNearbySolutions) {
  Solution a, b, c;
  a.w = {0.1, 0.2};
  b.w = {0.1, 0.205};
  c.w = {0.5, 0.2};
  const auto d = deduplicate({a, b, c}, 0.01);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[1].w, c.w);
}

TEST(Refine, DoesNotIncreaseLeadingError) {
  SearchConfig cfg;
  cfg.order = 4;
  cfg.m = 2;
  cfg.restarts = 20;
  const auto res = search(cfg);
  ASSERT_FALSE(res.solutions.empty());
  for (const auto& s : res.solutions) {
    const auto r = refine(s, 4);
    EXPECT_LE(r.next_order_residual_norm, s.next_order_residual_norm * (1 + 1e-12));
    EXPECT_LT(r.residual_norm, 1e-10);
  }
}

TEST(Polish, EighthOrderCatalogEntry) {
  const auto w = catalog_entry("KL8s15").kernel().values<double>();
  std::vector<Quad> wq(w.begin(), w.end());
  const auto p = polish<Quad>(wq, 8, 30);
  EXPECT_TRUE(p.converged);
  EXPECT_LT(to_double(p.residual_norm), 1e-25);
  EXPECT_LT(worst(residual(expand_weights(p.w, Quad(1)), 8)), 1e-25);
}

TEST(Polish, TrivialComposition) {
  const auto p = polish<Quad>({Quad(1)}, 4, 30);
  EXPECT_EQ(p.w.size(), 1u);
  EXPECT_EQ(p.w[0], Quad(1));
}

TEST(ProcessorSolve, FixedKernel) {
  const auto& e = catalog_entry("YP8m8");
  SearchConfig cfg;
  cfg.order = 8;
  cfg.mode = SearchMode::kJointProcessed;
  cfg.kernel = e.processed->kernel.values<double>();
  cfg.processor_stages = static_cast<int>(e.processed->gammas.size());
  cfg.gamma_seed = e.processed->gamma_values<double>();
  cfg.gamma_seed_sigma = 1e-3;
  cfg.restarts = 4;
  const auto res = search(cfg);
  ASSERT_FALSE(res.solutions.empty());
  EXPECT_LT(res.solutions[0].residual_norm, 1e-12);
}

TEST(ProcessorSolve, OrderKKernelAcceptsZeroProcessor) {
  const auto w = catalog_entry("KL8s15").kernel().values<double>();
  const auto r = residual(expand_processed_weights(w, std::vector<double>(4, 0.0), 1.0), 8);
  EXPECT_LT(worst(r), 1e-13);
}
