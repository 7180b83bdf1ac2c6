// probability.hpp
//
// Probability that weighted majority over the gurus elects the ground truth.
// A coalition of gurus wins iff its weight is strictly greater than n/2.
#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "liquid/model.hpp"

namespace liquid {

// Smallest coalition weight that wins with n voters: floor(n/2) + 1.
constexpr std::size_t majority_threshold(std::size_t n) noexcept {
  return n / 2 + 1;
}

struct WeightedVoter {
  std::size_t weight;
  double accuracy;
};

// at(t, i) is the probability that the correct voters among entries i..q-1
// carry weight at least t, for t in 0..max_threshold and i in 0..q-1.
// Thresholds below zero share the t = 0 row (probability 1).
class ProbabilityTable {
 public:
  ProbabilityTable(std::vector<WeightedVoter> entries, std::size_t max_threshold)
      : entries_(std::move(entries)),
        rows_(max_threshold + 1),
        cols_(entries_.size() + 1),
        table_(rows_ * cols_, 0.0) {
    // Column q is the empty suffix: 1 at t = 0, 0 above.
    cell(0, entries_.size()) = 1.0;
    for (std::size_t i = entries_.size(); i-- > 0;) {
      const auto [w, p] = entries_[i];
      for (std::size_t t = 0; t < rows_; ++t) {
        if (t == 0) {
          cell(t, i) = 1.0;
          continue;
        }
        const std::size_t reduced = t > w ? t - w : 0;
        cell(t, i) = p * cell(reduced, i + 1) + (1.0 - p) * cell(t, i + 1);
      }
    }
  }

  double at(std::size_t threshold, std::size_t position) const {
    return table_[threshold * cols_ + position];
  }
  // Probability for the full sequence; 1 when there are no entries and t = 0.
  double total(std::size_t threshold) const { return at(threshold, 0); }

  std::size_t max_threshold() const noexcept { return rows_ - 1; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<WeightedVoter>& entries() const noexcept { return entries_; }

 private:
  double& cell(std::size_t t, std::size_t i) { return table_[t * cols_ + i]; }

  std::vector<WeightedVoter> entries_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> table_;
};

// Gurus in the order the dynamic program processes them: descending weight,
// ties by ascending voter index.
inline std::vector<WeightedVoter> ordered_gurus(const GuruProfile& profile,
                                                std::span<const double> accuracies) {
  std::vector<Guru> gurus = profile.gurus;
  std::sort(gurus.begin(), gurus.end(), [](const Guru& a, const Guru& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.voter < b.voter;
  });
  std::vector<WeightedVoter> entries;
  entries.reserve(gurus.size());
  for (const auto& g : gurus) {
    if (g.voter >= accuracies.size()) throw Error("guru index out of range");
    entries.push_back({g.weight, accuracies[g.voter]});
  }
  return entries;
}

inline ProbabilityTable probability_table(const GuruProfile& profile,
                                          std::span<const double> accuracies) {
  return ProbabilityTable(ordered_gurus(profile, accuracies),
                          majority_threshold(profile.voters));
}

// O(q * n) dynamic program over the gurus.
inline double probability_dp(const GuruProfile& profile,
                             std::span<const double> accuracies) {
  const std::size_t threshold = majority_threshold(profile.voters);
  auto entries = ordered_gurus(profile, accuracies);
  // Rolling single column; equivalent to ProbabilityTable::total.
  std::vector<double> next(threshold + 1, 0.0), current(threshold + 1);
  next[0] = 1.0;
  for (std::size_t i = entries.size(); i-- > 0;) {
    const auto [w, p] = entries[i];
    current[0] = 1.0;
    for (std::size_t t = 1; t <= threshold; ++t) {
      const std::size_t reduced = t > w ? t - w : 0;
      current[t] = p * next[reduced] + (1.0 - p) * next[t];
    }
    std::swap(current, next);
  }
  return next[threshold];
}

struct OutcomeProbabilities {
  double truth;      // coalition voting T has weight > n/2
  double falsehood;  // coalition voting F has weight > n/2
};

inline constexpr std::size_t kBruteforceMaxGurus = 22;

// Direct sum over all 2^q correct-voter subsets.
inline OutcomeProbabilities outcome_probabilities_bruteforce(
    const GuruProfile& profile, std::span<const double> accuracies) {
  const std::size_t q = profile.gurus.size();
  if (q > kBruteforceMaxGurus) {
    throw Error("too many gurus for brute force: " + std::to_string(q));
  }
  const std::size_t n = profile.voters;
  OutcomeProbabilities out{0.0, 0.0};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << q); ++mask) {
    double prob = 1.0;
    std::size_t correct_weight = 0;
    for (std::size_t k = 0; k < q; ++k) {
      const double p = accuracies[profile.gurus[k].voter];
      if (mask >> k & 1U) {
        prob *= p;
        correct_weight += profile.gurus[k].weight;
      } else {
        prob *= 1.0 - p;
      }
    }
    if (2 * correct_weight > n) out.truth += prob;
    if (2 * (n - correct_weight) > n) out.falsehood += prob;
  }
  return out;
}

inline double probability_bruteforce(const GuruProfile& profile,
                                     std::span<const double> accuracies) {
  return outcome_probabilities_bruteforce(profile, accuracies).truth;
}

inline double score(const SocialNetwork& net, const Delegation& d) {
  return probability_dp(guru_profile(net, d), net.accuracies());
}

// Scores d against accuracies other than the ones stored in net.
inline double score(const SocialNetwork& net, const Delegation& d,
                    std::span<const double> accuracies) {
  return probability_dp(guru_profile(net, d), accuracies);
}

}  // namespace liquid
