// generators.hpp
//
// Seeded random social networks and accuracy vectors. Undirected models are
// turned into directed networks with one arc in each direction per edge.
// The three graph models follow the usual constructions (uniform G(n,m),
// preferential attachment grown from a star, ring lattice plus random
// shortcuts), driven by liquid::Rng so results reproduce across platforms.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "liquid/model.hpp"
#include "liquid/random.hpp"

namespace liquid {

using UndirectedEdges = std::set<std::pair<Voter, Voter>>;  // stored with first < second

inline SocialNetwork symmetric_network(std::vector<double> accuracies,
                                       const UndirectedEdges& edges) {
  std::vector<Arc> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& [u, v] : edges) {
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  return SocialNetwork(std::move(accuracies), std::move(arcs));
}

inline std::pair<Voter, Voter> edge_key(Voter u, Voter v) {
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

// Uniform over graphs with n nodes and m edges. m at or above n(n-1)/2 gives
// the complete graph; m above n(n-1) is rejected.
inline UndirectedEdges gnm_edges(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n > 0 && m > n * (n - 1)) throw Error("gnm: m exceeds n(n-1)");
  if (n == 0 && m > 0) throw Error("gnm: edges requested on an empty graph");
  UndirectedEdges edges;
  const std::size_t max_edges = n * (n - 1) / 2;
  if (m >= max_edges) {
    for (Voter u = 0; u < n; ++u) {
      for (Voter v = u + 1; v < n; ++v) edges.emplace(u, v);
    }
    return edges;
  }
  Rng rng(seed);
  while (edges.size() < m) {
    const Voter u = rng.index(n);
    const Voter v = rng.index(n);
    if (u != v) edges.insert(edge_key(u, v));
  }
  return edges;
}

// Grown from a star on m + 1 nodes; every new node attaches to m distinct
// targets drawn proportionally to degree.
inline UndirectedEdges barabasi_albert_edges(std::size_t n, std::size_t m,
                                             std::uint64_t seed) {
  if (m < 1 || m >= n) throw Error("barabasi-albert: need 1 <= m < n");
  UndirectedEdges edges;
  std::vector<Voter> repeated;
  for (Voter v = 1; v <= m; ++v) {
    edges.emplace(0, v);
    repeated.push_back(0);
    repeated.push_back(v);
  }
  Rng rng(seed);
  for (Voter source = m + 1; source < n; ++source) {
    std::set<Voter> targets;
    while (targets.size() < m) targets.insert(repeated[rng.index(repeated.size())]);
    for (Voter t : targets) {
      edges.insert(edge_key(source, t));
      repeated.push_back(t);
      repeated.push_back(source);
    }
  }
  return edges;
}

// Ring lattice joining each node to its k/2 nearest neighbors per side; for
// every lattice edge (u, v) a shortcut (u, w) to a uniform non-neighbor w is
// added with probability p. Lattice edges are never removed.
inline UndirectedEdges newman_watts_edges(std::size_t n, std::size_t k, double p,
                                          std::uint64_t seed) {
  if (k >= n) throw Error("watts-strogatz: need k < n");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("watts-strogatz: p outside [0,1]");
  UndirectedEdges edges;
  std::vector<std::pair<Voter, Voter>> lattice;
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (Voter u = 0; u < n; ++u) {
      const Voter v = (u + j) % n;
      if (edges.insert(edge_key(u, v)).second) lattice.emplace_back(u, v);
    }
  }
  std::vector<std::size_t> degree(n, 0);
  for (const auto& [u, v] : edges) {
    ++degree[u];
    ++degree[v];
  }
  Rng rng(seed);
  for (const auto& [u, v] : lattice) {
    (void)v;
    if (!rng.bernoulli(p)) continue;
    if (degree[u] >= n - 1) continue;
    Voter w;
    do {
      w = rng.index(n);
    } while (w == u || edges.count(edge_key(u, w)) != 0);
    edges.insert(edge_key(u, w));
    ++degree[u];
    ++degree[w];
  }
  return edges;
}

struct GaussianComponent {
  double weight;
  double mean;
  double sd;
};

struct AccuracyModel {
  // experts, misinformed, average
  std::vector<GaussianComponent> components{{0.10, 0.7, 0.1}, {0.20, 0.3, 0.1}, {0.70, 0.5, 0.1}};
  std::optional<double> prec = 0.1;

  void check() const {
    if (components.empty()) throw Error("accuracy model has no components");
    double total = 0.0;
    for (const auto& c : components) {
      if (!(c.weight >= 0.0)) throw Error("negative mixture weight");
      if (!(c.sd > 0.0)) throw Error("mixture sd must be positive");
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("mixture weights must sum to 1");
    if (prec && !(*prec > 0.0 && *prec <= 1.0)) throw Error("prec must lie in (0,1]");
  }
};

// Largest-remainder rounding of weight * n; ties go to earlier components.
inline std::vector<std::size_t> component_counts(std::size_t n, const AccuracyModel& model) {
  const auto& comps = model.components;
  std::vector<std::size_t> counts(comps.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const double exact = comps[c].weight * static_cast<double>(n);
    // Guard against 0.7 * 10 = 6.999...
    const double floor_v = std::floor(exact + 1e-9);
    counts[c] = static_cast<std::size_t>(floor_v);
    assigned += counts[c];
    remainders.emplace_back(exact - floor_v, c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) {
    ++counts[remainders[r % remainders.size()].second];
  }
  return counts;
}

// Gaussian draw redrawn until it lies strictly inside (0, 1).
inline double truncated_normal(Rng& rng, double mean, double sd) {
  for (;;) {
    const double x = rng.normal(mean, sd);
    if (x > 0.0 && x < 1.0) return x;
  }
}

inline std::vector<double> sample_accuracies(std::size_t n, const AccuracyModel& model,
                                             std::uint64_t seed) {
  model.check();
  const auto counts = component_counts(n, model);
  std::vector<std::size_t> label;
  label.reserve(n);
  for (std::size_t c = 0; c < counts.size(); ++c) label.insert(label.end(), counts[c], c);
  Rng rng(seed);
  rng.shuffle(label);
  std::vector<double> p(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& comp = model.components[label[v]];
    p[v] = truncated_normal(rng, comp.mean, comp.sd);
  }
  return p;
}

// Midpoint of the bin [i prec, min((i+1) prec, 1)] holding p.
inline double quantize(double p, double prec) {
  if (!(prec > 0.0)) throw Error("prec must be positive");
  const double i = std::floor(p / prec);
  const double lo = i * prec;
  const double hi = std::min((i + 1.0) * prec, 1.0);
  return (lo + std::max(lo, hi)) / 2.0;
}

inline std::vector<double> quantize_all(const std::vector<double>& p, std::optional<double> prec) {
  if (!prec) return p;
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = quantize(p[i], *prec);
  return out;
}

enum class GraphModel { kGnm, kBarabasiAlbert, kWattsStrogatz };

struct GraphSpec {
  GraphModel model = GraphModel::kGnm;
  std::size_t n = 11;
  std::size_t m = 44;       // gnm: edges; barabasi-albert: attachments per node
  std::size_t k = 2;        // watts-strogatz lattice degree
  double p_rewire = 0.1;    // watts-strogatz shortcut probability
};

inline UndirectedEdges generate_edges(const GraphSpec& spec, std::uint64_t seed) {
  switch (spec.model) {
    case GraphModel::kGnm:
      return gnm_edges(spec.n, spec.m, seed);
    case GraphModel::kBarabasiAlbert:
      return barabasi_albert_edges(spec.n, spec.m, seed);
    case GraphModel::kWattsStrogatz:
      return newman_watts_edges(spec.n, spec.k, spec.p_rewire, seed);
  }
  throw Error("unknown graph model");
}

inline SocialNetwork gen_gnm(std::size_t n, std::size_t m, std::uint64_t seed,
                             std::vector<double> accuracies = {}) {
  if (accuracies.empty()) accuracies.assign(n, 0.5);
  return symmetric_network(std::move(accuracies), gnm_edges(n, m, seed));
}

inline SocialNetwork gen_barabasi(std::size_t n, std::size_t m, std::uint64_t seed,
                                  std::vector<double> accuracies = {}) {
  if (accuracies.empty()) accuracies.assign(n, 0.5);
  return symmetric_network(std::move(accuracies), barabasi_albert_edges(n, m, seed));
}

inline SocialNetwork gen_watts(std::size_t n, std::size_t k, double p, std::uint64_t seed,
                               std::vector<double> accuracies = {}) {
  if (accuracies.empty()) accuracies.assign(n, 0.5);
  return symmetric_network(std::move(accuracies), newman_watts_edges(n, k, p, seed));
}

}  // namespace liquid
