// model.hpp
//
// Voters, the social network they delegate over, delegation functions and
// the guru weights a delegation induces.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liquid {

using Voter = std::size_t;
using Arc = std::pair<Voter, Voter>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Directed graph of voters with one accuracy per voter. An arc (i, j) means
// "i may delegate to j". Self-loops are never stored; voting directly is
// always available. Immutable after construction.
class SocialNetwork {
 public:
  SocialNetwork() = default;

  // Throws Error on out-of-range accuracies, dangling endpoints or self-loops.
  // Duplicate arcs are collapsed.
  SocialNetwork(std::vector<double> accuracies, std::vector<Arc> arcs)
      : accuracies_(std::move(accuracies)),
        out_(accuracies_.size()),
        in_(accuracies_.size()) {
    const std::size_t n = accuracies_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double p = accuracies_[i];
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error("accuracy out of range at voter " + std::to_string(i));
      }
    }
    for (const auto& [from, to] : arcs) {
      if (from >= n || to >= n) {
        throw Error("dangling endpoint in arc (" + std::to_string(from) + ", " +
                    std::to_string(to) + ") with n=" + std::to_string(n));
      }
      if (from == to) {
        throw Error("self-loop arc at voter " + std::to_string(from));
      }
      out_[from].push_back(to);
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto& nb = out_[i];
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      arc_count_ += nb.size();
      for (Voter j : nb) in_[j].push_back(i);
    }
  }

  std::size_t size() const noexcept { return accuracies_.size(); }
  std::size_t arc_count() const noexcept { return arc_count_; }

  double accuracy(Voter v) const { return accuracies_[v]; }
  const std::vector<double>& accuracies() const noexcept { return accuracies_; }

  // Sorted ascending.
  const std::vector<Voter>& out_neighbors(Voter v) const { return out_[v]; }
  const std::vector<Voter>& in_neighbors(Voter v) const { return in_[v]; }

  bool has_arc(Voter from, Voter to) const {
    const auto& nb = out_[from];
    return std::binary_search(nb.begin(), nb.end(), to);
  }

  std::vector<Arc> arcs() const {
    std::vector<Arc> result;
    result.reserve(arc_count_);
    for (Voter i = 0; i < size(); ++i) {
      for (Voter j : out_[i]) result.emplace_back(i, j);
    }
    return result;
  }

  // Same topology, different accuracies (used to hand quantized estimates to
  // strategies while scoring with the true values).
  SocialNetwork with_accuracies(std::vector<double> accuracies) const {
    if (accuracies.size() != size()) {
      throw Error("accuracy vector length does not match network size");
    }
    return SocialNetwork(std::move(accuracies), arcs());
  }

  friend bool operator==(const SocialNetwork& a, const SocialNetwork& b) {
    return a.accuracies_ == b.accuracies_ && a.out_ == b.out_;
  }

 private:
  std::vector<double> accuracies_;
  std::vector<std::vector<Voter>> out_;
  std::vector<std::vector<Voter>> in_;
  std::size_t arc_count_ = 0;
};

// choice[i] == i means i votes directly (is a guru); otherwise i delegates to
// choice[i].
class Delegation {
 public:
  Delegation() = default;
  explicit Delegation(std::vector<Voter> choice) : choice_(std::move(choice)) {}

  static Delegation direct(std::size_t n) {
    std::vector<Voter> choice(n);
    for (Voter i = 0; i < n; ++i) choice[i] = i;
    return Delegation(std::move(choice));
  }

  std::size_t size() const noexcept { return choice_.size(); }
  Voter operator[](Voter v) const { return choice_[v]; }
  Voter& operator[](Voter v) { return choice_[v]; }
  bool is_guru(Voter v) const { return choice_[v] == v; }
  const std::vector<Voter>& choices() const noexcept { return choice_; }

  std::vector<Voter> gurus() const {
    std::vector<Voter> result;
    for (Voter v = 0; v < size(); ++v) {
      if (is_guru(v)) result.push_back(v);
    }
    return result;
  }

  friend bool operator==(const Delegation&, const Delegation&) = default;
  friend auto operator<=>(const Delegation& a, const Delegation& b) {
    return a.choice_ <=> b.choice_;
  }

 private:
  std::vector<Voter> choice_;
};

struct DelegationViolation {
  enum class Kind { kLengthMismatch, kIllegalArc, kCycle };
  Kind kind;
  // kIllegalArc: the offending (voter, target); kCycle: voters on the cycle
  // in delegation order.
  std::vector<Voter> voters;
  std::string message;
};

// nullopt when the delegation is valid on the network.
inline std::optional<DelegationViolation> validate_delegation(
    const SocialNetwork& net, const Delegation& d) {
  const std::size_t n = net.size();
  if (d.size() != n) {
    return DelegationViolation{DelegationViolation::Kind::kLengthMismatch,
                               {},
                               "delegation has " + std::to_string(d.size()) +
                                   " entries for " + std::to_string(n) +
                                   " voters"};
  }
  for (Voter i = 0; i < n; ++i) {
    const Voter j = d[i];
    if (j == i) continue;
    if (j >= n || !net.has_arc(i, j)) {
      return DelegationViolation{
          DelegationViolation::Kind::kIllegalArc,
          {i, j},
          "voter " + std::to_string(i) + " delegates to " + std::to_string(j) +
              " without an arc"};
    }
  }
  // 0 = unvisited, 1 = on the current walk, 2 = known to reach a guru.
  std::vector<std::uint8_t> state(n, 0);
  std::vector<Voter> walk;
  for (Voter start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    walk.clear();
    Voter v = start;
    while (state[v] == 0 && d[v] != v) {
      state[v] = 1;
      walk.push_back(v);
      v = d[v];
    }
    if (state[v] == 1) {
      auto pos = std::find(walk.begin(), walk.end(), v);
      std::vector<Voter> cycle(pos, walk.end());
      std::string msg = "delegation cycle:";
      for (Voter c : cycle) msg += " " + std::to_string(c);
      return DelegationViolation{DelegationViolation::Kind::kCycle,
                                 std::move(cycle), std::move(msg)};
    }
    state[v] = 2;
    for (Voter w : walk) state[w] = 2;
  }
  return std::nullopt;
}

inline bool is_valid_delegation(const SocialNetwork& net, const Delegation& d) {
  return !validate_delegation(net, d).has_value();
}

struct Guru {
  Voter voter;
  std::size_t weight;
  friend bool operator==(const Guru&, const Guru&) = default;
};

// Gurus in ascending voter order. Weights sum to the number of voters.
struct GuruProfile {
  std::vector<Guru> gurus;
  std::size_t voters = 0;

  std::size_t total_weight() const {
    std::size_t w = 0;
    for (const auto& g : gurus) w += g.weight;
    return w;
  }
};

// Guru reached by every voter's delegation chain. Requires an acyclic
// delegation; Error otherwise.
inline std::vector<Voter> guru_of(const Delegation& d) {
  const std::size_t n = d.size();
  constexpr Voter kUnknown = static_cast<Voter>(-1);
  std::vector<Voter> root(n, kUnknown);
  std::vector<Voter> walk;
  for (Voter start = 0; start < n; ++start) {
    if (root[start] != kUnknown) continue;
    walk.clear();
    Voter v = start;
    while (root[v] == kUnknown && d[v] != v) {
      if (d[v] >= n) throw Error("delegation target out of range");
      walk.push_back(v);
      if (walk.size() > n) throw Error("delegation contains a cycle");
      v = d[v];
    }
    const Voter r = root[v] != kUnknown ? root[v] : v;
    root[v] = r;
    for (Voter w : walk) root[w] = r;
  }
  return root;
}

inline GuruProfile guru_profile(const SocialNetwork& net, const Delegation& d) {
  if (auto violation = validate_delegation(net, d)) {
    throw Error("invalid delegation: " + violation->message);
  }
  const auto root = guru_of(d);
  std::vector<std::size_t> weight(d.size(), 0);
  for (Voter r : root) ++weight[r];
  GuruProfile profile;
  profile.voters = d.size();
  for (Voter v = 0; v < d.size(); ++v) {
    if (d.is_guru(v)) profile.gurus.push_back({v, weight[v]});
  }
  return profile;
}

}  // namespace liquid
