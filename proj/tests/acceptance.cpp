// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "liquid/liquid.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace liquid;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(bool pass, const std::string& name, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Runs body(k) for k in [0, count) on all cores; results in index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F body) {
  std::vector<T> out(count);
  const unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < count; k += workers) out[k] = body(k);
    }));
  }
  for (auto& job : jobs) job.get();
  return out;
}

void example_exactness() {
  const auto net = liquid::testing::example_network();
  const auto d = liquid::testing::example_delegation();
  const auto start = Clock::now();
  const double p = score(net, d);
  const double elapsed = seconds_since(start);
  report(std::abs(p - 0.98) <= 1e-12 && elapsed < 1e-3, "seven-voter-exactness",
         format("score=%.15f |err|=%.2e runtime=%.3e s (limit 1e-3)", p, std::abs(p - 0.98),
                elapsed));
}

void oracle_equivalence() {
  Rng rng(derive_seed(1, {1}));
  const auto start = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 * rng.index(16) + 1;  // odd, <= 31
    const std::size_t q = 1 + rng.index(std::min<std::size_t>(15, n));
    GuruProfile profile{{}, n};
    std::vector<std::size_t> weight(q, 1);
    for (std::size_t extra = n - q; extra > 0; --extra) ++weight[rng.index(q)];
    std::vector<double> p(n, 0.5);
    for (std::size_t g = 0; g < q; ++g) {
      profile.gurus.push_back({g, weight[g]});
      p[g] = rng.uniform01();
    }
    worst = std::max(worst, std::abs(probability_dp(profile, p) - probability_bruteforce(profile, p)));
  }
  const double elapsed = seconds_since(start);
  report(worst <= 1e-10 && elapsed < 5.0, "oracle-equivalence",
         format("500 profiles, max |dp - brute|=%.2e (limit 1e-10), runtime=%.2f s (limit 5)",
                worst, elapsed));
}

void monotonicity() {
  Rng rng(derive_seed(1, {2}));
  std::size_t violations = 0, checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto net = liquid::testing::random_network(1 + rng.index(40), 0.15, rng);
    const auto d = liquid::testing::random_delegation(net, rng);
    const double base = score(net, d);
    for (Voter v = 0; v < net.size(); ++v) {
      auto p = net.accuracies();
      p[v] += (1.0 - p[v]) * rng.uniform01();
      ++checks;
      if (score(net, d, p) < base - 1e-12) ++violations;
    }
  }
  report(violations == 0, "monotonicity",
         format("200 instances, %zu single-accuracy raises, violations=%zu", checks, violations));
}

void best_guru_optimality() {
  const auto start = Clock::now();
  struct Outcome {
    double gap_low;    // |opt - best_guru| with p < 0.5
    double ratio_any;  // best_guru / opt with unrestricted p
  };
  const auto outcomes = parallel_map<Outcome>(100, [](std::size_t k) {
    Rng rng(derive_seed(1, {3, k}));
    const std::size_t n = 3 + 2 * (k % 3);
    auto low = liquid::testing::random_strong_network(n, n, rng, 0.01, 0.49);
    Outcome out{};
    out.gap_low = std::abs(exhaustive_optimum(low, 1).score - score(low, best_guru(low)));
    std::vector<double> p(n);
    for (auto& x : p) x = 0.01 + 0.98 * rng.uniform01();
    const auto any = low.with_accuracies(p);
    out.ratio_any = score(any, best_guru(any)) / exhaustive_optimum(any, 1).score;
    return out;
  });
  double worst_gap = 0.0, worst_ratio = 1.0;
  for (const auto& o : outcomes) {
    worst_gap = std::max(worst_gap, o.gap_low);
    worst_ratio = std::min(worst_ratio, o.ratio_any);
  }
  const double elapsed = seconds_since(start);
  report(worst_gap <= 1e-10 && worst_ratio >= 0.5 && elapsed < 120.0, "best-guru-optimality",
         format("100 strongly connected nets n in {3,5,7}: max gap (p<0.5)=%.2e (limit 1e-10), "
                "min best_guru/opt (any p)=%.4f (limit 0.5), runtime=%.2f s (limit 120)",
                worst_gap, worst_ratio, elapsed));
}

SocialNetwork mixed_instance(std::size_t k) {
  const std::uint64_t seed = derive_seed(1, {4, k});
  Rng rng(seed);
  const std::size_t n = 1 + rng.index(101);
  auto p = sample_accuracies(n, AccuracyModel{}, derive_seed(seed, {1}));
  switch (k % 4) {
    case 0:
      return symmetric_network(std::move(p), gnm_edges(n, std::min(4 * n, n * (n - 1) / 2),
                                                        derive_seed(seed, {2})));
    case 1:
      if (n > 2) return symmetric_network(std::move(p), barabasi_albert_edges(n, 2, derive_seed(seed, {2})));
      return SocialNetwork(std::move(p), {});
    case 2:
      if (n > 2) {
        return symmetric_network(std::move(p),
                                 newman_watts_edges(n, 2, 0.1, derive_seed(seed, {2})));
      }
      return SocialNetwork(std::move(p), {});
    default: {
      auto net = liquid::testing::random_network(n, 3.0 / static_cast<double>(n), rng);
      return net.with_accuracies(std::move(p));
    }
  }
}

void strategy_validity() {
  const auto start = Clock::now();
  struct Outcome {
    std::size_t runs = 0, invalid = 0, downhill = 0;
  };
  const auto outcomes = parallel_map<Outcome>(1000, [](std::size_t k) {
    const auto net = mixed_instance(k);
    StrategyParams params;
    params.seed = derive_seed(1, {5, k});
    Outcome out;
    for (const auto& [method, name] : kMethodNames) {
      if (method == Method::kExact) continue;
      const auto d = run_method(net, method, params);
      ++out.runs;
      if (!is_valid_delegation(net, d)) ++out.invalid;
      if (method == Method::kEmerging) {
        for (Voter v = 0; v < net.size(); ++v) {
          if (!d.is_guru(v) && !(net.accuracy(d[v]) > net.accuracy(v))) ++out.downhill;
        }
      }
    }
    return out;
  });
  Outcome total;
  for (const auto& o : outcomes) {
    total.runs += o.runs;
    total.invalid += o.invalid;
    total.downhill += o.downhill;
  }
  report(total.invalid == 0 && total.downhill == 0, "strategy-validity",
         format("1000 instances n<=101, %zu strategy runs, invalid=%zu, downhill emerging=%zu, "
                "runtime=%.1f s",
                total.runs, total.invalid, total.downhill, seconds_since(start)));
}

void heuristic_vs_direct() {
  const auto start = Clock::now();
  ExperimentConfig cfg;
  cfg.model = GraphModel::kGnm;
  cfg.sizes = {11, 21, 31, 41, 51};
  cfg.m_factor = 4.0;
  cfg.methods = {Method::kDirect, Method::kLsGr, Method::kLsVo, Method::kGreedyCap,
                 Method::kEmerging};
  cfg.graph_reps = 10;
  cfg.acc_reps = 5;
  cfg.seed = derive_seed(1, {6});
  cfg.record_runtime = false;
  const auto rows = run_experiment(cfg);
  std::map<std::pair<std::size_t, std::string>, std::pair<double, std::size_t>> sums;
  std::size_t errors = 0;
  for (const auto& row : rows) {
    if (!row.error.empty()) ++errors;
    auto& s = sums[{row.n, row.method}];
    s.first += row.score;
    ++s.second;
  }
  bool ok = errors == 0;
  std::string detail;
  for (std::size_t n : cfg.sizes) {
    const auto& d = sums[{n, "direct"}];
    const double direct = d.first / static_cast<double>(d.second);
    detail += format("n=%zu direct=%.3f", n, direct);
    for (const char* m : {"ls_gr", "ls_vo", "greedy_cap", "emerging"}) {
      const auto& s = sums[{n, m}];
      const double mean = s.first / static_cast<double>(s.second);
      ok = ok && s.second == 50 && mean > direct;
      detail += format(" %s=%.3f", m, mean);
    }
    detail += "; ";
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 600.0;
  report(ok, "heuristic-vs-direct",
         detail + format("errors=%zu, runtime=%.1f s (limit 600)", errors, elapsed));
}

void exhaustive_vs_heuristics() {
  const auto start = Clock::now();
  ExperimentConfig cfg;
  cfg.model = GraphModel::kGnm;
  cfg.sizes = {3, 5, 7, 9};
  cfg.m_factor = 2.0;
  cfg.methods = {Method::kExact,  Method::kDirect,    Method::kBestGuru,
                 Method::kGreedyGr, Method::kGreedyVo, Method::kLsGr,
                 Method::kLsVo,   Method::kGreedyCap, Method::kEmerging};
  cfg.graph_reps = 4;
  cfg.acc_reps = 5;
  cfg.seed = derive_seed(1, {7});
  cfg.record_runtime = false;
  const auto rows = run_experiment(cfg);
  // Rows come grouped per cell, exact first.
  std::size_t cells = 0, above = 0, close = 0, errors = 0;
  double worst_excess = 0.0;
  for (std::size_t r = 0; r < rows.size(); r += cfg.methods.size()) {
    ++cells;
    const double opt = rows[r].score;
    for (std::size_t k = r; k < r + cfg.methods.size(); ++k) {
      if (!rows[k].error.empty()) ++errors;
      if (rows[k].score > opt + 1e-12) ++above;
      worst_excess = std::max(worst_excess, rows[k].score - opt);
      if (rows[k].method == "ls_gr" && opt - rows[k].score <= 0.05) ++close;
    }
  }
  const double share = static_cast<double>(close) / static_cast<double>(cells);
  const double elapsed = seconds_since(start);
  report(errors == 0 && above == 0 && share >= 0.8 && elapsed < 300.0,
         "exhaustive-vs-heuristics",
         format("%zu cells, heuristic above optimum=%zu (max excess %.1e), ls_gr within 0.05 on "
                "%.1f%% (limit 80%%), errors=%zu, runtime=%.1f s (limit 300)",
                cells, above, worst_excess, 100.0 * share, errors, elapsed));
}

void reduction_arithmetic() {
  const ReductionParams params{3, {{0, 1}, {1, 2}, {0, 2}}, 0.25};
  const auto rep = verify_reduction_inequalities(params);
  const auto& sz = rep.sizes;
  bool ok = sz.isolated == 3456 && sz.chain == 635 && sz.voters == 5364 &&
            std::abs(rep.enough_isolated.margin - 0.6) <= 1e-9 && rep.pass() &&
            build_reduction(params).network.size() == 5364;
  int grid = 0, grid_pass = 0;
  for (std::size_t N : {1U, 2U, 4U, 6U, 10U}) {
    for (std::size_t M : {1U, 3U}) {
      for (double beta : {0.1, 0.4}) {
        ReductionParams p{N, std::vector<std::vector<std::size_t>>(M), beta};
        for (std::size_t e = 0; e < N; ++e) p.sets[e % M].push_back(e);
        ++grid;
        grid_pass += verify_reduction_inequalities(p).pass();
      }
    }
  }
  ok = ok && grid == 20 && grid_pass == 20;
  report(ok, "reduction-arithmetic",
         format("K=%llu L=%llu n=%llu margin=%.6f, grid %d/%d pass",
                static_cast<unsigned long long>(sz.isolated),
                static_cast<unsigned long long>(sz.chain),
                static_cast<unsigned long long>(sz.voters), rep.enough_isolated.margin, grid_pass,
                grid));
}

void circulation_correctness() {
  Rng rng(derive_seed(1, {8}));
  std::size_t feasible = 0, bad_flow = 0, unbalanced_ok = 0, small = 0, disagree = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const bool tiny = trial % 2 == 0;
    const std::size_t n = tiny ? 2 + rng.index(7) : 2 + rng.index(199);
    const auto net = liquid::testing::random_network(n, std::min(1.0, 2.5 / static_cast<double>(n)), rng);
    // Targets from a random integral delegation (always feasible) or a
    // random normalized vector (often not).
    std::vector<double> target(n, 0.0);
    if (trial % 4 < 2) {
      for (const auto& g : guru_profile(net, liquid::testing::random_delegation(net, rng)).gurus) {
        target[g.voter] = static_cast<double>(g.weight) / static_cast<double>(n);
      }
    } else {
      double total = 0.0;
      for (auto& w : target) total += (w = rng.bernoulli(0.5) ? rng.uniform01() : 0.0);
      if (total == 0.0) target[0] = total = 1.0;
      for (auto& w : target) w /= total;
    }
    const auto res = feasdel(net, target);
    FlowNetwork flow;
    for (Voter i = 0; i < n; ++i) flow.demands.push_back(target[i] - 1.0 / static_cast<double>(n));
    for (const auto& [i, j] : net.arcs()) flow.arcs.push_back({i, j, 1.0});
    if (res.feasible) {
      ++feasible;
      const double v = liquid::testing::worst_violation(flow, res.weight);
      worst = std::max(worst, v);
      if (v > 1e-9) ++bad_flow;
    }
    if (tiny) {
      ++small;
      if (res.feasible != liquid::testing::feasible_by_cuts(flow)) ++disagree;
    }
    FlowNetwork unbalanced = flow;
    unbalanced.demands[rng.index(n)] += 0.01 + rng.uniform01();
    if (!feasible_circulation(unbalanced).feasible) ++unbalanced_ok;
  }
  report(bad_flow == 0 && unbalanced_ok == 200 && disagree == 0, "circulation-correctness",
         format("200 instances: %zu feasible, max flow violation=%.1e (limit 1e-9), "
                "unbalanced rejected %zu/200, cut-check disagreements %zu/%zu",
                feasible, worst, unbalanced_ok, disagree, small));
}

void milp_exporter() {
  Rng rng(derive_seed(1, {9}));
  std::size_t infeasible = 0, count_mismatch = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = liquid::testing::random_network(1 + rng.index(9), 0.3, rng);
    const auto model = build_milp(net);
    const auto d = liquid::testing::random_delegation(net, rng);
    const double v = milp_max_violation(model, milp_assignment(model, net, d));
    worst = std::max(worst, v);
    if (v > 1e-9) ++infeasible;
    const auto lp = liquid::testing::read_lp(export_lp(model));
    const auto counts = milp_counts(net.size(), net.arc_count());
    if (lp.rows != counts.rows || lp.variables.size() != counts.variables ||
        lp.binaries.size() != counts.binaries) {
      ++count_mismatch;
    }
  }
  report(infeasible == 0 && count_mismatch == 0, "milp-exporter",
         format("50 instances n<=9: violated assignments=%zu (max violation %.1e), count "
                "mismatches=%zu",
                infeasible, worst, count_mismatch));
}

void determinism() {
  ExperimentConfig cfg;
  cfg.sizes = {11, 21, 31};
  cfg.methods = {Method::kDirect, Method::kBestGuru, Method::kGreedyGr, Method::kLsVo,
                 Method::kGreedyCap, Method::kEmerging};
  cfg.graph_reps = 3;
  cfg.acc_reps = 3;
  cfg.seed = derive_seed(1, {10});
  cfg.record_runtime = false;
  std::ostringstream first, second;
  run_experiment(cfg, &first);
  cfg.threads = 1;
  run_experiment(cfg, &second);
  report(first.str() == second.str() && !first.str().empty(), "determinism",
         format("two runs of a %zu-byte CSV are %s", first.str().size(),
                first.str() == second.str() ? "byte-identical" : "different"));
}

}  // namespace

int main() {
  example_exactness();
  oracle_equivalence();
  monotonicity();
  best_guru_optimality();
  strategy_validity();
  heuristic_vs_direct();
  exhaustive_vs_heuristics();
  reduction_arithmetic();
  circulation_correctness();
  milp_exporter();
  determinism();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
