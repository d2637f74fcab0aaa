#include "prodform/solver.hpp"

#include "prodform/parallel.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace prodform {

const char* mode_name(SearchMode mode) {
  switch (mode) {
    case SearchMode::kPlain:
      return "plain";
    case SearchMode::kKernel:
      return "kernel";
    case SearchMode::kJointProcessed:
      return "joint";
  }
  return "plain";
}

SearchMode parse_mode(const std::string& text) {
  if (text == "plain") return SearchMode::kPlain;
  if (text == "kernel") return SearchMode::kKernel;
  if (text == "joint" || text == "processed") return SearchMode::kJointProcessed;
  throw std::invalid_argument("unknown search mode: " + text);
}

double default_sigma(int order) {
  if (order >= 10) return 0.9;
  if (order == 8) return 0.6;
  return 1.0;
}

namespace {

void check_order(int order) {
  if (order != 4 && order != 6 && order != 8 && order != 10)
    throw std::invalid_argument("search supports orders 4, 6, 8 and 10");
}

/// Kernel conditions from the recursion: the values that no processor can remove.
std::vector<double> kernel_recursion_residual(const std::vector<double>& tail, int order) {
  const auto s = run_recursion(with_central_weight(tail));
  std::vector<double> out{s.A3};
  if (order >= 6) out.push_back(s.A5);
  if (order >= 8) {
    out.push_back(s.A7);
    out.push_back(s.C7);
  }
  return out;
}

std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

LmOptions<double> search_options(const SearchConfig& cfg) {
  LmOptions<double> o;
  o.max_iterations = cfg.max_iterations;
  o.fd_step = cfg.fd_step;
  o.tolerance = cfg.tolerance * 1e-4;
  return o;
}

/// Roundoff in the residual grows like |w|^k, so acceptance is relative to it.
double residual_scale(const std::vector<double>& w, int order) {
  double m = 1.0;
  for (double v : w) m = std::max(m, std::abs(v));
  return std::pow(m, order);
}

double kernel_next_order_norm(const std::vector<double>& w, int order) {
  return norm2(kernel_residual(expand_weights(w, 1.0), order + 1));
}

}  // namespace

double next_order_norm(const std::vector<double>& w, int order) {
  return norm2(residual(expand_weights(w, 1.0), order + 1));
}

std::vector<Solution> deduplicate(const std::vector<Solution>& sols, double distance) {
  std::vector<Solution> kept;
  for (const auto& s : sols) {
    bool dup = false;
    for (const auto& k : kept) {
      if (k.w.size() != s.w.size() || k.gammas.size() != s.gammas.size()) continue;
      double d2 = 0.0;
      for (std::size_t i = 0; i < s.w.size(); ++i) d2 += (s.w[i] - k.w[i]) * (s.w[i] - k.w[i]);
      for (std::size_t i = 0; i < s.gammas.size(); ++i)
        d2 += (s.gammas[i] - k.gammas[i]) * (s.gammas[i] - k.gammas[i]);
      if (std::sqrt(d2) < distance) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(s);
  }
  return kept;
}

SearchResult search(const SearchConfig& cfg) {
  if (cfg.mode == SearchMode::kJointProcessed) return joint_processed_search(cfg);
  check_order(cfg.order);
  if (cfg.m < 1) throw std::invalid_argument("search needs m >= 1");
  if (cfg.restarts < 0) throw std::invalid_argument("restarts must be non-negative");
  const bool kernel = cfg.mode == SearchMode::kKernel;
  if (kernel && cfg.order == 10) throw std::invalid_argument("kernel search supports orders 4, 6 and 8");

  ResidualFn<double> f;
  if (kernel)
    f = [order = cfg.order](const std::vector<double>& t) { return kernel_recursion_residual(t, order); };
  else
    f = plain_recursion_residual<double>(cfg.order);
  const auto opt = search_options(cfg);

  std::vector<std::optional<Solution>> slots(static_cast<std::size_t>(cfg.restarts));
  std::vector<char> converged(slots.size(), 0);
  run_parallel(cfg.restarts, cfg.jobs, [&](int r) {
    auto rng = restart_rng(cfg.seed, r);
    std::normal_distribution<double> nd(0.0, cfg.init_sigma);
    std::vector<double> x0(static_cast<std::size_t>(cfg.m));
    for (auto& v : x0) v = nd(rng);
    auto res = levenberg_marquardt(f, x0, opt);
    Solution s;
    s.w = with_central_weight(res.x);
    s.restart = r;
    const double bound = cfg.tolerance * residual_scale(s.w, cfg.order);
    if (!(res.norm < bound)) return;
    converged[static_cast<std::size_t>(r)] = 1;
    // cross-engine check on the word series
    if (kernel) {
      s.residual_norm = norm2(kernel_residual(expand_weights(s.w, 1.0), cfg.order));
      if (!(s.residual_norm < bound)) return;
      s.next_order_residual_norm = kernel_next_order_norm(s.w, cfg.order);
    } else {
      s.residual_norm = norm2(residual(expand_weights(s.w, 1.0), cfg.order));
      if (!(s.residual_norm < bound)) return;
      s.next_order_residual_norm = next_order_norm(s.w, cfg.order);
    }
    slots[static_cast<std::size_t>(r)] = std::move(s);
  });

  SearchResult out;
  out.restarts = cfg.restarts;
  std::vector<Solution> all;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    out.converged += converged[i];
    if (slots[i]) {
      ++out.verified;
      all.push_back(*slots[i]);
    }
  }
  out.solutions = deduplicate(all, cfg.dedup_distance);
  return out;
}

SearchResult joint_processed_search(const SearchConfig& cfg) {
  check_order(cfg.order);
  const int g = cfg.processor_stages;
  if (g < 2) throw std::invalid_argument("processor needs at least two stages");
  const bool fixed = cfg.kernel.has_value();
  const int m = fixed ? static_cast<int>(cfg.kernel->size()) - 1 : cfg.m;
  if (m < 1) throw std::invalid_argument("search needs m >= 1");
  if (cfg.gamma_seed && static_cast<int>(cfg.gamma_seed->size()) != g && static_cast<int>(cfg.gamma_seed->size()) != g - 1)
    throw std::invalid_argument("gamma seed length does not match the processor length");

  auto f = processed_word_residual<double>(cfg.order, m, g, cfg.kernel);
  const auto opt = search_options(cfg);

  std::vector<std::optional<Solution>> slots(static_cast<std::size_t>(cfg.restarts));
  std::vector<char> converged(slots.size(), 0);
  run_parallel(cfg.restarts, cfg.jobs, [&](int r) {
    auto rng = restart_rng(cfg.seed, r);
    std::normal_distribution<double> nd(0.0, cfg.init_sigma);
    std::normal_distribution<double> nd_g(0.0, cfg.gamma_seed ? cfg.gamma_seed_sigma : cfg.init_sigma);
    std::vector<double> x0;
    if (!fixed)
      for (int i = 0; i < m; ++i) x0.push_back(nd(rng));
    for (int i = 0; i < g - 1; ++i) x0.push_back((cfg.gamma_seed ? (*cfg.gamma_seed)[static_cast<std::size_t>(i)] : 0.0) + nd_g(rng));
    auto res = levenberg_marquardt(f, x0, opt);
    Solution s;
    s.restart = r;
    std::vector<double> head;
    if (fixed) {
      s.w = *cfg.kernel;
      head = res.x;
    } else {
      s.w = with_central_weight(std::vector<double>(res.x.begin(), res.x.begin() + m));
      head.assign(res.x.begin() + m, res.x.end());
    }
    double sum = 0.0;
    for (double v : head) sum += v;
    s.gammas = head;
    s.gammas.push_back(-sum);
    std::vector<double> all_w = s.w;
    all_w.insert(all_w.end(), s.gammas.begin(), s.gammas.end());
    const double bound = cfg.tolerance * residual_scale(all_w, cfg.order);
    if (!(res.norm < bound)) return;
    converged[static_cast<std::size_t>(r)] = 1;
    // independent check: the kernel part must satisfy the reduced conditions
    s.residual_norm = norm2(residual(expand_processed_weights(s.w, s.gammas, 1.0), cfg.order));
    if (!(s.residual_norm < bound)) return;
    if (!fixed && !(norm2(kernel_residual(expand_weights(s.w, 1.0), cfg.order)) < 1e3 * bound)) return;
    s.next_order_residual_norm = kernel_next_order_norm(s.w, cfg.order);
    slots[static_cast<std::size_t>(r)] = std::move(s);
  });

  SearchResult out;
  out.restarts = cfg.restarts;
  std::vector<Solution> all;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    out.converged += converged[i];
    if (slots[i]) {
      ++out.verified;
      all.push_back(*slots[i]);
    }
  }
  out.solutions = deduplicate(all, cfg.dedup_distance);
  return out;
}

Solution refine(const Solution& sol, int order, int max_steps) {
  check_order(order);
  std::vector<double> x(sol.w.begin() + 1, sol.w.end());
  const auto cons = plain_recursion_residual<double>(order);
  const std::size_t n = x.size();
  auto objective = [&](const std::vector<double>& t) { return next_order_norm(with_central_weight(t), order); };

  LmOptions<double> proj_opt;
  proj_opt.max_iterations = 50;
  proj_opt.tolerance = 1e-15;
  auto project = [&](const std::vector<double>& t) { return levenberg_marquardt(cons, t, proj_opt); };

  double obj = objective(x);
  double step = 1e-2;
  for (int it = 0; it < max_steps; ++it) {
    auto r0 = cons(x);
    auto jac = fd_jacobian(cons, x, r0, 1e-7);
    std::vector<double> grad(n);
    for (std::size_t c = 0; c < n; ++c) {
      auto xp = x;
      const double h = 1e-7 * std::max(1.0, std::abs(x[c]));
      xp[c] += h;
      grad[c] = (objective(xp) - obj) / h;
    }
    // project the gradient onto the null space of the constraint Jacobian
    ThinQr<double> qr(jac.transpose());
    auto comp = qr.residual(grad);
    const double gn = norm2(comp);
    if (gn == 0.0) break;
    bool improved = false;
    double new_obj = obj;
    std::vector<double> xn;
    for (int ls = 0; ls < 30; ++ls) {
      std::vector<double> trial = x;
      for (std::size_t i = 0; i < n; ++i) trial[i] -= step * comp[i] / gn;
      auto pr = project(trial);
      if (pr.converged) {
        const double o = objective(pr.x);
        if (o < obj) {
          xn = pr.x;
          new_obj = o;
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;
    const double rel = (obj - new_obj) / obj;
    x = xn;
    obj = new_obj;
    step *= 2.0;
    if (rel < 1e-3) break;
  }
  Solution out = sol;
  out.w = with_central_weight(x);
  out.residual_norm = norm2(residual(expand_weights(out.w, 1.0), order));
  out.next_order_residual_norm = obj;
  return out;
}

}  // namespace prodform
