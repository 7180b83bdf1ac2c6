// strategies.hpp
//
// Delegation-construction procedures: baselines (direct voting, best guru),
// the two assignment rules for a set of mandatory gurus, greedy and local
// search over that set, GreedyCap and the decentralized emerging mechanism.
//
// All tie-breaks are deterministic; only `emerging` consumes randomness.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "liquid/model.hpp"
#include "liquid/paths.hpp"
#include "liquid/probability.hpp"
#include "liquid/random.hpp"

namespace liquid {

struct StrategyParams {
  double epsilon = 0.05;          // minimum improvement for search steps
  double greedy_cap_alpha = 0.0;  // approve j iff p_j > p_i + alpha
  double cap_scale = 10.0;        // cap(n) = ceil(scale * ln(n)^exponent)
  double cap_exponent = 1.0 / 3.0;
  std::uint64_t seed = 0;

  void check() const {
    if (!(epsilon >= 0.0)) throw Error("epsilon must be non-negative");
    if (!(greedy_cap_alpha >= 0.0)) throw Error("alpha must be non-negative");
    if (!(cap_scale > 0.0) || !(cap_exponent > 0.0)) {
      throw Error("cap parameters must be positive");
    }
  }
};

// Mandatory gurus.
class GuruSet {
 public:
  explicit GuruSet(std::size_t n = 0) : in_(n, false) {}
  GuruSet(std::size_t n, const std::vector<Voter>& members) : in_(n, false) {
    for (Voter v : members) insert(v);
  }

  static GuruSet of(const Delegation& d) { return GuruSet(d.size(), d.gurus()); }

  std::size_t universe() const noexcept { return in_.size(); }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  bool contains(Voter v) const { return in_[v]; }

  void insert(Voter v) {
    if (v >= in_.size()) throw Error("guru index out of range");
    if (!in_[v]) {
      in_[v] = true;
      ++count_;
    }
  }
  void erase(Voter v) {
    if (in_[v]) {
      in_[v] = false;
      --count_;
    }
  }

  std::vector<Voter> members() const {
    std::vector<Voter> out;
    for (Voter v = 0; v < in_.size(); ++v) {
      if (in_[v]) out.push_back(v);
    }
    return out;
  }

  const std::vector<bool>& mask() const noexcept { return in_; }

  friend bool operator==(const GuruSet& a, const GuruSet& b) { return a.in_ == b.in_; }

 private:
  std::vector<bool> in_;
  std::size_t count_ = 0;
};

enum class Assigner { kGreedy, kVoronoi };

inline Delegation direct_democracy(const SocialNetwork& net) {
  return Delegation::direct(net.size());
}

// Highest-accuracy voter, ties to the lowest index. n must be positive.
inline Voter most_accurate(const SocialNetwork& net) {
  Voter best = 0;
  for (Voter v = 1; v < net.size(); ++v) {
    if (net.accuracy(v) > net.accuracy(best)) best = v;
  }
  return best;
}

// Everyone who can reach the most accurate voter delegates along a shortest
// path toward her.
inline Delegation best_guru(const SocialNetwork& net) {
  auto d = direct_democracy(net);
  if (net.size() == 0) return d;
  const auto dist = hops_to(net, most_accurate(net));
  for (Voter v = 0; v < net.size(); ++v) {
    const Voter hop = next_hop(net, v, dist);
    if (hop != kUnreachable) d[v] = hop;
  }
  return d;
}

namespace detail {

inline std::vector<Voter> by_descending_accuracy(const SocialNetwork& net,
                                                 std::vector<Voter> voters) {
  std::stable_sort(voters.begin(), voters.end(), [&](Voter a, Voter b) {
    return net.accuracy(a) > net.accuracy(b);
  });
  return voters;
}

}  // namespace detail

// Gurus are served in descending accuracy; each takes every unassigned
// non-guru that can reach her through unassigned non-gurus. A voter that can
// reach an already served guru through non-gurus would have been taken by
// her, so this is the same as reachability in G[(V \ S) + g].
inline Delegation greedy_delegation(const SocialNetwork& net, const GuruSet& gurus) {
  const std::size_t n = net.size();
  auto d = direct_democracy(net);
  std::vector<bool> free(n);
  for (Voter v = 0; v < n; ++v) free[v] = !gurus.contains(v);
  for (Voter g : detail::by_descending_accuracy(net, gurus.members())) {
    const auto dist = hops_to(net, g, free);
    for (Voter v = 0; v < n; ++v) {
      if (v == g || dist[v] == kUnreachable) continue;
      d[v] = next_hop(net, v, dist);
      free[v] = false;
    }
  }
  return d;
}

// For every non-guru, the guru minimizing (hops to g) / p_g, ties to higher
// accuracy then lower index; kUnreachable when no guru is reachable. Hops are
// counted on paths whose interior avoids the guru set (a path through another
// guru cannot carry a delegation). Gurus map to themselves.
inline std::vector<Voter> voronoi_targets(const SocialNetwork& net, const GuruSet& gurus,
                                          std::vector<std::vector<std::size_t>>* dist_out = nullptr) {
  const std::size_t n = net.size();
  const auto members = gurus.members();
  std::vector<bool> free(n);
  for (Voter v = 0; v < n; ++v) free[v] = !gurus.contains(v);
  std::vector<std::vector<std::size_t>> dist(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (!(net.accuracy(members[k]) > 0.0)) {
      throw Error("voronoi assignment needs positive guru accuracies");
    }
    dist[k] = hops_to(net, members[k], free);
  }
  std::vector<Voter> target(n, kUnreachable);
  for (Voter v = 0; v < n; ++v) {
    if (gurus.contains(v)) {
      target[v] = v;
      continue;
    }
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best = members.size();
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (dist[k][v] == kUnreachable) continue;
      const double p = net.accuracy(members[k]);
      const double cost = static_cast<double>(dist[k][v]) / p;
      if (best == members.size() || cost < best_cost ||
          (cost == best_cost && p > net.accuracy(members[best]))) {
        best_cost = cost;
        best = k;
      }
    }
    if (best != members.size()) target[v] = members[best];
  }
  if (dist_out) *dist_out = std::move(dist);
  return target;
}

// Each non-guru delegates one hop along a shortest path toward its voronoi
// target, preferring a next hop with the same target. That next hop's own
// weighted distance is strictly smaller, so the result is acyclic; a voter
// may still end at a different guru when no next hop shares its target.
inline Delegation voronoi_delegation(const SocialNetwork& net, const GuruSet& gurus) {
  std::vector<std::vector<std::size_t>> dist;
  const auto target = voronoi_targets(net, gurus, &dist);
  const auto members = gurus.members();
  auto d = direct_democracy(net);
  for (Voter v = 0; v < net.size(); ++v) {
    if (gurus.contains(v) || target[v] == kUnreachable) continue;
    const auto k = static_cast<std::size_t>(
        std::lower_bound(members.begin(), members.end(), target[v]) - members.begin());
    const auto& dk = dist[k];
    Voter chosen = kUnreachable;
    for (Voter u : net.out_neighbors(v)) {
      if (dk[u] == kUnreachable || dk[u] + 1 != dk[v]) continue;
      if (target[u] == target[v]) {
        chosen = u;
        break;
      }
      if (chosen == kUnreachable) chosen = u;
    }
    d[v] = chosen;
  }
  return d;
}

inline Delegation assign(const SocialNetwork& net, const GuruSet& gurus, Assigner how) {
  return how == Assigner::kGreedy ? greedy_delegation(net, gurus)
                                  : voronoi_delegation(net, gurus);
}

struct SearchResult {
  Delegation delegation;
  GuruSet gurus;
  std::vector<double> trace;  // score after every accepted step, start first
};

// Grows the mandatory guru set one voter at a time while the best addition
// improves the score by more than epsilon.
inline SearchResult greedy_search(const SocialNetwork& net, Assigner how,
                                  const StrategyParams& params = {}) {
  params.check();
  const std::size_t n = net.size();
  SearchResult result{direct_democracy(net), GuruSet(n), {}};
  double current = score(net, result.delegation);
  result.trace.push_back(current);
  while (result.gurus.size() < n) {
    double best_score = -1.0;
    Voter best = kUnreachable;
    Delegation best_d;
    for (Voter v = 0; v < n; ++v) {
      if (result.gurus.contains(v)) continue;
      GuruSet trial = result.gurus;
      trial.insert(v);
      auto d = assign(net, trial, how);
      const double s = score(net, d);
      if (s > best_score) {
        best_score = s;
        best = v;
        best_d = std::move(d);
      }
    }
    if (best == kUnreachable || !(best_score - current > params.epsilon)) break;
    result.gurus.insert(best);
    result.delegation = std::move(best_d);
    current = best_score;
    result.trace.push_back(current);
  }
  return result;
}

inline Delegation greedy_strategy(const SocialNetwork& net, Assigner how,
                                  const StrategyParams& params = {}) {
  return greedy_search(net, how, params).delegation;
}

// Single-voter additions to or removals from Gu(start), best first (additions
// before removals on ties, then lower index), while the improvement exceeds
// epsilon. Returns `start` unchanged when no move qualifies.
inline SearchResult local_search(const SocialNetwork& net, const Delegation& start,
                                 Assigner how, const StrategyParams& params = {}) {
  params.check();
  const std::size_t n = net.size();
  SearchResult result{start, GuruSet::of(start), {}};
  double current = score(net, start);
  result.trace.push_back(current);
  for (;;) {
    double best_score = -1.0;
    GuruSet best_set;
    Delegation best_d;
    // Pass 0 = additions, pass 1 = removals.
    for (int pass = 0; pass < 2; ++pass) {
      for (Voter v = 0; v < n; ++v) {
        const bool member = result.gurus.contains(v);
        if (member != (pass == 1)) continue;
        GuruSet trial = result.gurus;
        if (member) {
          trial.erase(v);
        } else {
          trial.insert(v);
        }
        auto d = assign(net, trial, how);
        const double s = score(net, d);
        if (s > best_score) {
          best_score = s;
          best_set = std::move(trial);
          best_d = std::move(d);
        }
      }
    }
    if (!(best_score - current > params.epsilon)) break;
    result.gurus = std::move(best_set);
    result.delegation = std::move(best_d);
    current = best_score;
    result.trace.push_back(current);
  }
  return result;
}

inline Delegation local_search_strategy(const SocialNetwork& net, const Delegation& start,
                                        Assigner how, const StrategyParams& params = {}) {
  return local_search(net, start, how, params).delegation;
}

inline std::size_t greedy_cap_limit(std::size_t n, const StrategyParams& params = {}) {
  if (n < 2) return 1;
  return static_cast<std::size_t>(
      std::ceil(params.cap_scale * std::pow(std::log(static_cast<double>(n)),
                                            params.cap_exponent)));
}

// Voters in descending accuracy each join the approved out-neighbor whose
// guru currently represents the most voters, provided that guru's weight
// stays within the cap; ties to higher accuracy then lower index.
inline Delegation greedy_cap(const SocialNetwork& net, const StrategyParams& params = {}) {
  params.check();
  const std::size_t n = net.size();
  auto d = direct_democracy(net);
  if (n < 2) return d;
  const std::size_t cap = greedy_cap_limit(n, params);

  std::vector<Voter> order(n);
  for (Voter v = 0; v < n; ++v) order[v] = v;
  order = detail::by_descending_accuracy(net, std::move(order));

  std::vector<std::size_t> weight(n, 1);  // meaningful at gurus
  std::vector<std::size_t> held(n, 1);  // size of each voter's in-tree

  auto find_root = [&](Voter v) {
    while (d[v] != v) v = d[v];
    return v;
  };

  for (Voter i : order) {
    const double pi = net.accuracy(i);
    Voter best = kUnreachable;
    std::size_t best_count = 0;
    for (Voter j : net.out_neighbors(i)) {
      if (!(net.accuracy(j) > pi + params.greedy_cap_alpha)) continue;
      const Voter r = find_root(j);
      if (r == i) continue;
      const std::size_t count = weight[r];
      if (count + held[i] > cap) continue;
      if (best == kUnreachable || count > best_count ||
          (count == best_count && net.accuracy(j) > net.accuracy(best))) {
        best = j;
        best_count = count;
      }
    }
    if (best == kUnreachable) continue;
    const Voter r = find_root(best);
    d[i] = best;
    weight[r] += held[i];
    for (Voter v = best; ; v = d[v]) {
      held[v] += held[i];
      if (d[v] == v) break;
    }
  }
  return d;
}

// Approved delegates of i: more accurate out-neighbors plus i herself.
inline std::vector<Voter> approved_delegates(const SocialNetwork& net, Voter i) {
  std::vector<Voter> approved{i};
  for (Voter j : net.out_neighbors(i)) {
    if (net.accuracy(j) > net.accuracy(i)) approved.push_back(j);
  }
  return approved;
}

// Every voter independently picks j among her approved delegates with
// probability p_j / (sum of their accuracies).
inline Delegation emerging(const SocialNetwork& net, Rng& rng) {
  auto d = direct_democracy(net);
  for (Voter i = 0; i < net.size(); ++i) {
    const auto approved = approved_delegates(net, i);
    double total = 0.0;
    for (Voter k : approved) total += net.accuracy(k);
    const double u = rng.uniform01();
    if (approved.size() == 1 || !(total > 0.0)) continue;
    double cumulative = 0.0;
    Voter pick = approved.back();
    for (Voter k : approved) {
      cumulative += net.accuracy(k) / total;
      if (u < cumulative) {
        pick = k;
        break;
      }
    }
    d[i] = pick;
  }
  return d;
}

}  // namespace liquid
