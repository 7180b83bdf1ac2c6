// circulation.hpp
//
// Circulation with node demands, solved by a single max-flow from a super
// source (feeding every supply node) to a super sink (draining every demand
// node). Demand d_v > 0 means v receives d_v more than it sends.
//
// When every demand and capacity is a rational with a small common
// denominator (<= 1e6) the flow runs exactly on integers; otherwise it runs
// on doubles.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "liquid/model.hpp"

namespace liquid {

// Dinic's algorithm.
template <class Cap>
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes, Cap tolerance = Cap{})
      : adj_(nodes), level_(nodes), cursor_(nodes), tol_(tolerance) {}

  std::size_t add_edge(std::size_t from, std::size_t to, Cap capacity) {
    const std::size_t id = edges_.size();
    edges_.push_back({to, capacity, capacity});
    adj_[from].push_back(id);
    edges_.push_back({from, Cap{}, Cap{}});
    adj_[to].push_back(id + 1);
    return id;
  }

  Cap run(std::size_t source, std::size_t sink) {
    Cap total{};
    while (build_levels(source, sink)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      for (;;) {
        const Cap pushed = augment(source, sink, std::numeric_limits<Cap>::max());
        if (!(pushed > tol_)) break;
        total += pushed;
      }
    }
    return total;
  }

  // Flow on an edge returned by add_edge.
  Cap flow(std::size_t id) const { return edges_[id].capacity - edges_[id].residual; }

 private:
  struct Edge {
    std::size_t to;
    Cap residual;
    Cap capacity;
  };

  bool build_levels(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    level_[source] = 0;
    std::deque<std::size_t> queue{source};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t id : adj_[v]) {
        const Edge& e = edges_[id];
        if (e.residual > tol_ && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  Cap augment(std::size_t v, std::size_t sink, Cap limit) {
    if (v == sink) return limit;
    for (std::size_t& i = cursor_[v]; i < adj_[v].size(); ++i) {
      const std::size_t id = adj_[v][i];
      Edge& e = edges_[id];
      if (!(e.residual > tol_) || level_[e.to] != level_[v] + 1) continue;
      const Cap pushed = augment(e.to, sink, std::min(limit, e.residual));
      if (pushed > tol_) {
        e.residual -= pushed;
        edges_[id ^ 1].residual += pushed;
        return pushed;
      }
    }
    return Cap{};
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
  Cap tol_;
};

struct FlowArc {
  std::size_t from;
  std::size_t to;
  double capacity;
};

struct FlowNetwork {
  std::vector<double> demands;
  std::vector<FlowArc> arcs;
};

struct CirculationResult {
  bool feasible = false;
  std::vector<double> flow;  // per arc, when feasible
  std::string reason;        // why infeasible
  bool exact = false;        // solved on scaled integers
};

inline constexpr double kFlowTolerance = 1e-9;

namespace detail {

// Best rational with denominator <= max_den by continued fractions; nullopt
// when none is within 1e-12 relative.
inline std::optional<std::pair<std::int64_t, std::int64_t>> to_rational(double x,
                                                                        std::int64_t max_den) {
  if (!std::isfinite(x) || std::abs(x) > 1e12) return std::nullopt;
  const double ax = std::abs(x);
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double y = ax;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(y);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(ax - static_cast<double>(h1) / static_cast<double>(k1)) <=
        1e-12 * std::max(1.0, ax)) {
      return std::pair{x < 0 ? -h1 : h1, k1};
    }
    const double frac = y - a;
    if (frac <= 0.0) break;
    y = 1.0 / frac;
  }
  return std::nullopt;
}

// Common denominator of all values, or nullopt when it would exceed max_den.
inline std::optional<std::int64_t> common_scale(const std::vector<double>& values,
                                                std::int64_t max_den) {
  std::int64_t scale = 1;
  for (double v : values) {
    auto r = to_rational(v, max_den);
    if (!r) return std::nullopt;
    scale = std::lcm(scale, r->second);
    if (scale > max_den) return std::nullopt;
  }
  return scale;
}

template <class Cap>
CirculationResult solve_circulation(const std::vector<Cap>& demand,
                                    const std::vector<FlowArc>& arcs,
                                    const std::vector<Cap>& capacity, Cap tol) {
  const std::size_t n = demand.size();
  const std::size_t source = n, sink = n + 1;
  MaxFlow<Cap> flow(n + 2, tol);
  std::vector<std::size_t> ids(arcs.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    ids[a] = flow.add_edge(arcs[a].from, arcs[a].to, capacity[a]);
  }
  Cap required{};
  for (std::size_t v = 0; v < n; ++v) {
    if (demand[v] < Cap{}) flow.add_edge(source, v, -demand[v]);
    if (demand[v] > Cap{}) {
      flow.add_edge(v, sink, demand[v]);
      required += demand[v];
    }
  }
  const Cap achieved = flow.run(source, sink);
  CirculationResult res;
  bool saturated;
  if constexpr (std::is_integral_v<Cap>) {
    saturated = achieved == required;
  } else {
    saturated = achieved >= required - kFlowTolerance * std::max(1.0, static_cast<double>(required));
  }
  if (!saturated) {
    res.reason = "max flow does not saturate the demands";
    return res;
  }
  res.feasible = true;
  res.flow.resize(arcs.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    res.flow[a] = static_cast<double>(flow.flow(ids[a]));
  }
  return res;
}

}  // namespace detail

inline CirculationResult feasible_circulation(const FlowNetwork& net) {
  const std::size_t n = net.demands.size();
  for (const auto& a : net.arcs) {
    if (a.from >= n || a.to >= n) throw Error("flow arc endpoint out of range");
    if (!std::isfinite(a.capacity)) throw Error("capacities must be finite");
    if (a.capacity < 0.0) throw Error("negative capacity");
  }
  double sum = 0.0, scale_ref = 1.0;
  for (double d : net.demands) {
    if (!std::isfinite(d)) throw Error("demands must be finite");
    sum += d;
    scale_ref = std::max(scale_ref, std::abs(d));
  }
  if (std::abs(sum) > kFlowTolerance * scale_ref) {
    return {false, {}, "demands do not sum to zero", false};
  }

  std::vector<double> values = net.demands;
  for (const auto& a : net.arcs) values.push_back(a.capacity);
  constexpr std::int64_t kMaxDenominator = 1'000'000;
  if (auto scale = detail::common_scale(values, kMaxDenominator)) {
    const double s = static_cast<double>(*scale);
    bool fits = true;
    for (double v : values) fits = fits && std::abs(v * s) < 1e15;
    if (fits) {
      std::vector<std::int64_t> demand(n), capacity(net.arcs.size());
      std::int64_t total = 0;
      for (std::size_t v = 0; v < n; ++v) {
        demand[v] = std::llround(net.demands[v] * s);
        total += demand[v];
      }
      if (total != 0) return {false, {}, "demands do not sum to zero", true};
      for (std::size_t a = 0; a < net.arcs.size(); ++a) {
        capacity[a] = std::llround(net.arcs[a].capacity * s);
      }
      auto res = detail::solve_circulation<std::int64_t>(demand, net.arcs, capacity, 0);
      res.exact = true;
      for (double& f : res.flow) f /= s;
      return res;
    }
  }
  std::vector<double> capacity(net.arcs.size());
  for (std::size_t a = 0; a < net.arcs.size(); ++a) capacity[a] = net.arcs[a].capacity;
  return detail::solve_circulation<double>(net.demands, net.arcs, capacity, 1e-15);
}

struct FractionalDelegation {
  bool feasible = false;
  std::vector<Arc> arcs;      // social-network arcs, in SocialNetwork::arcs() order
  std::vector<double> weight;  // normalized weight delegated along each arc
  std::string reason;
};

// Can every voter i end with normalized weight target[i] by passing fractions
// of the 1/n each voter holds along network arcs? Demands are target - 1/n and
// every arc has capacity 1, the total weight in play.
inline FractionalDelegation feasdel(const SocialNetwork& net, const std::vector<double>& target) {
  const std::size_t n = net.size();
  if (target.size() != n) throw Error("target weight vector length differs from n");
  double total = 0.0;
  for (double w : target) {
    if (!(w >= 0.0)) throw Error("target weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error("target weights must sum to 1");

  FlowNetwork flow;
  flow.demands.resize(n);
  const double share = 1.0 / static_cast<double>(n);
  for (Voter i = 0; i < n; ++i) flow.demands[i] = target[i] - share;
  FractionalDelegation out;
  out.arcs = net.arcs();
  for (const auto& [i, j] : out.arcs) flow.arcs.push_back({i, j, 1.0});

  // Share-denominated demands keep the exact path available when targets are
  // multiples of 1/n; the flow is converted back afterwards.
  FlowNetwork scaled = flow;
  for (Voter i = 0; i < n; ++i) scaled.demands[i] = target[i] * static_cast<double>(n) - 1.0;
  for (auto& a : scaled.arcs) a.capacity = static_cast<double>(n);
  const auto res = feasible_circulation(scaled);
  out.feasible = res.feasible;
  out.reason = res.reason;
  if (res.feasible) {
    out.weight.resize(res.flow.size());
    for (std::size_t a = 0; a < res.flow.size(); ++a) out.weight[a] = res.flow[a] * share;
  }
  return out;
}

}  // namespace liquid
