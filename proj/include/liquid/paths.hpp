// paths.hpp
#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

#include "liquid/model.hpp"

namespace liquid {

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Hop distance from every voter to `target` along arcs of net. Only voters
// with passable[v] set may appear on a path (the target always may). An empty
// mask means every voter is passable.
inline std::vector<std::size_t> hops_to(const SocialNetwork& net, Voter target,
                                        const std::vector<bool>& passable = {}) {
  std::vector<std::size_t> dist(net.size(), kUnreachable);
  std::deque<Voter> queue{target};
  dist[target] = 0;
  while (!queue.empty()) {
    const Voter v = queue.front();
    queue.pop_front();
    for (Voter u : net.in_neighbors(v)) {
      if (dist[u] != kUnreachable) continue;
      if (!passable.empty() && !passable[u]) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  return dist;
}

// Lowest-index out-neighbor one hop closer under `dist`, or kUnreachable.
inline Voter next_hop(const SocialNetwork& net, Voter v,
                      const std::vector<std::size_t>& dist) {
  if (dist[v] == kUnreachable || dist[v] == 0) return kUnreachable;
  for (Voter u : net.out_neighbors(v)) {
    if (dist[u] != kUnreachable && dist[u] + 1 == dist[v]) return u;
  }
  return kUnreachable;
}

// True when every voter can reach every other voter.
inline bool strongly_connected(const SocialNetwork& net) {
  if (net.size() <= 1) return true;
  const auto to_root = hops_to(net, 0);
  for (auto d : to_root) {
    if (d == kUnreachable) return false;
  }
  std::vector<bool> seen(net.size(), false);
  std::deque<Voter> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    const Voter v = queue.front();
    queue.pop_front();
    for (Voter u : net.out_neighbors(v)) {
      if (!seen[u]) {
        seen[u] = true;
        ++count;
        queue.push_back(u);
      }
    }
  }
  return count == net.size();
}

}  // namespace liquid
