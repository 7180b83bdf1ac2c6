// exact.hpp
//
// Exhaustive search over every delegation function of a small network.
#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <thread>
#include <vector>

#include "liquid/model.hpp"
#include "liquid/probability.hpp"

namespace liquid {

inline constexpr double kExhaustiveMaxFunctions = 1e7;

struct ExactResult {
  Delegation delegation;
  double score = 0.0;
  std::uint64_t evaluated = 0;  // acyclic delegation functions scored
};

// Number of delegation functions (cyclic ones included) of net.
inline double delegation_space_size(const SocialNetwork& net) {
  double size = 1.0;
  for (Voter v = 0; v < net.size(); ++v) {
    size *= static_cast<double>(net.out_neighbors(v).size() + 1);
  }
  return size;
}

namespace detail {

// Options of voter v in ascending order, so odometer order is lexicographic.
inline std::vector<std::vector<Voter>> delegation_options(const SocialNetwork& net) {
  std::vector<std::vector<Voter>> options(net.size());
  for (Voter v = 0; v < net.size(); ++v) {
    options[v] = net.out_neighbors(v);
    options[v].push_back(v);
    std::sort(options[v].begin(), options[v].end());
  }
  return options;
}

inline bool acyclic(const std::vector<Voter>& choice, std::vector<std::uint8_t>& state) {
  std::fill(state.begin(), state.end(), 0);
  for (Voter start = 0; start < choice.size(); ++start) {
    if (state[start] != 0) continue;
    Voter v = start;
    while (state[v] == 0 && choice[v] != v) {
      state[v] = 1;
      v = choice[v];
    }
    if (state[v] == 1) return false;
    for (Voter u = start; state[u] == 1; u = choice[u]) state[u] = 2;
  }
  return true;
}

// Scans the assignments whose first voter takes options[0][first], in
// lexicographic order (last voter varies fastest).
inline ExactResult exhaustive_slice(const SocialNetwork& net,
                                    const std::vector<std::vector<Voter>>& options,
                                    std::size_t first) {
  const std::size_t n = net.size();
  ExactResult best;
  best.score = -1.0;
  std::vector<std::size_t> digit(n, 0);
  digit[0] = first;
  std::vector<Voter> choice(n);
  for (Voter v = 0; v < n; ++v) choice[v] = options[v][digit[v]];
  std::vector<std::uint8_t> state(n);
  std::vector<std::size_t> weight(n);
  GuruProfile profile;
  profile.voters = n;
  for (;;) {
    if (acyclic(choice, state)) {
      std::fill(weight.begin(), weight.end(), 0);
      for (Voter v = 0; v < n; ++v) {
        Voter r = v;
        while (choice[r] != r) r = choice[r];
        ++weight[r];
      }
      profile.gurus.clear();
      for (Voter v = 0; v < n; ++v) {
        if (choice[v] == v) profile.gurus.push_back({v, weight[v]});
      }
      const double s = probability_dp(profile, net.accuracies());
      ++best.evaluated;
      if (s > best.score) {
        best.score = s;
        best.delegation = Delegation(choice);
      }
    }
    bool done = true;
    for (std::size_t pos = n; pos > 1;) {
      --pos;
      if (++digit[pos] < options[pos].size()) {
        choice[pos] = options[pos][digit[pos]];
        done = false;
        break;
      }
      digit[pos] = 0;
      choice[pos] = options[pos][0];
    }
    if (done) break;
  }
  return best;
}

}  // namespace detail

// Best delegation function by enumeration; ties go to the lexicographically
// smallest choice vector. Throws when the search space exceeds the guard.
inline ExactResult exhaustive_optimum(const SocialNetwork& net, unsigned threads = 0) {
  if (delegation_space_size(net) > kExhaustiveMaxFunctions) {
    throw Error("exhaustive search space exceeds guard");
  }
  if (net.size() == 0) return {Delegation{}, 0.0, 1};
  const auto options = detail::delegation_options(net);
  const std::size_t slices = options[0].size();
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());

  std::vector<ExactResult> partial(slices);
  if (threads == 1 || slices == 1) {
    for (std::size_t s = 0; s < slices; ++s) {
      partial[s] = detail::exhaustive_slice(net, options, s);
    }
  } else {
    std::vector<std::future<ExactResult>> jobs;
    for (std::size_t s = 0; s < slices; ++s) {
      jobs.push_back(std::async(std::launch::async, [&, s] {
        return detail::exhaustive_slice(net, options, s);
      }));
    }
    for (std::size_t s = 0; s < slices; ++s) partial[s] = jobs[s].get();
  }
  // Slices are in lexicographic order of the first choice.
  ExactResult best = partial[0];
  std::uint64_t total = partial[0].evaluated;
  for (std::size_t s = 1; s < slices; ++s) {
    total += partial[s].evaluated;
    if (partial[s].score > best.score) best = partial[s];
  }
  best.evaluated = total;
  return best;
}

}  // namespace liquid
