// reduction.hpp
//
// Network built from a set-cover instance (universe of N elements, M sets)
// with misinformation level beta in (0, 0.5):
//
//   K isolated voters at accuracy r = 0.5 - beta, K = ceil(8 N^2 M / beta^2)
//   for each element i, L voters v_i1..v_iL at accuracy r with arcs
//     v_ij -> v_i1 for j >= 2,
//     L = floor(beta (4N - 1) / (N (2N - 1)) K + M / N) + 1
//   one voter per set at accuracy 0.5, with v_i1 -> v_S iff element i in S.
//
// Voter order: isolated block, element blocks (head first), set voters.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "liquid/model.hpp"

namespace liquid {

struct ReductionParams {
  std::size_t universe = 0;                   // N
  std::vector<std::vector<std::size_t>> sets;  // M sets of 0-based elements
  double beta = 0.25;
};

struct ReductionSizes {
  std::uint64_t isolated;   // K
  std::uint64_t chain;      // L
  std::uint64_t voters;     // n = K + N L + M
  double r;                 // 0.5 - beta
  double slack;             // epsilon = beta / (2 (2N - 1))
};

inline void check_reduction_params(const ReductionParams& params) {
  if (!(params.beta > 0.0 && params.beta < 0.5)) throw Error("beta must lie in (0, 0.5)");
  if (params.universe < 1) throw Error("reduction needs N >= 1");
  if (params.sets.empty()) throw Error("reduction needs M >= 1");
  for (const auto& s : params.sets) {
    for (auto x : s) {
      if (x >= params.universe) throw Error("set element outside the universe");
    }
  }
}

inline ReductionSizes reduction_sizes(const ReductionParams& params) {
  check_reduction_params(params);
  const long double N = static_cast<long double>(params.universe);
  const long double M = static_cast<long double>(params.sets.size());
  const long double beta = params.beta;
  const long double k_exact = 8.0L * N * N * M / (beta * beta);
  // Integral values come out of the division with rounding noise.
  long double k_round = std::round(k_exact);
  const long double K =
      std::abs(k_exact - k_round) <= 1e-9L * k_exact ? k_round : std::ceil(k_exact);
  const long double l_raw = beta * (4.0L * N - 1.0L) / (N * (2.0L * N - 1.0L)) * K + M / N;
  const long double L = std::floor(l_raw) + 1.0L;
  ReductionSizes out;
  out.isolated = static_cast<std::uint64_t>(K);
  out.chain = static_cast<std::uint64_t>(L);
  out.voters = out.isolated + params.universe * out.chain + params.sets.size();
  out.r = 0.5 - params.beta;
  out.slack = params.beta / (2.0 * (2.0 * static_cast<double>(params.universe) - 1.0));
  return out;
}

inline bool sets_cover_universe(const ReductionParams& params) {
  std::vector<bool> covered(params.universe, false);
  for (const auto& s : params.sets) {
    for (auto x : s) covered[x] = true;
  }
  for (bool c : covered) {
    if (!c) return false;
  }
  return true;
}

struct ReductionInstance {
  SocialNetwork network;
  ReductionSizes sizes;
  bool covers = true;  // false: the sets miss some element

  Voter element_voter(std::size_t element, std::size_t j) const {
    return static_cast<Voter>(sizes.isolated + element * sizes.chain + j);
  }
  Voter set_voter(std::size_t set, std::size_t universe) const {
    return static_cast<Voter>(sizes.isolated + universe * sizes.chain + set);
  }
};

inline ReductionInstance build_reduction(const ReductionParams& params) {
  ReductionInstance inst;
  inst.sizes = reduction_sizes(params);
  inst.covers = sets_cover_universe(params);
  const auto& sz = inst.sizes;
  std::vector<double> p(sz.voters, sz.r);
  const std::size_t N = params.universe;
  for (std::size_t s = 0; s < params.sets.size(); ++s) p[inst.set_voter(s, N)] = 0.5;
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < N; ++i) {
    const Voter head = inst.element_voter(i, 0);
    for (std::size_t j = 1; j < sz.chain; ++j) arcs.emplace_back(inst.element_voter(i, j), head);
  }
  for (std::size_t s = 0; s < params.sets.size(); ++s) {
    for (auto x : params.sets[s]) {
      arcs.emplace_back(inst.element_voter(x, 0), inst.set_voter(s, N));
    }
  }
  inst.network = SocialNetwork(std::move(p), std::move(arcs));
  return inst;
}

struct InequalityCheck {
  double lhs;
  double rhs;
  double margin;  // lhs - rhs; the check passes when margin is positive
                  // (strict) or non-negative (non-strict)
  bool strict;
  bool pass;
};

struct ReductionReport {
  ReductionSizes sizes;
  // (r - eps) K + N L > n / 2
  InequalityCheck enough_isolated;
  // (beta - eps) K >= (N - 1) L / 2 + M / 2
  InequalityCheck missing_voters;
  // n <= 4^N, only asserted when N >= 35 / beta^2 (compared in log space)
  bool size_bound_applies;
  bool size_bound_pass;
  bool pass() const {
    return enough_isolated.pass && missing_voters.pass &&
           (!size_bound_applies || size_bound_pass);
  }
};

// Evaluates the inequalities for the given sizes; callers may pass perturbed
// sizes to probe the margins.
inline ReductionReport verify_reduction_inequalities(const ReductionParams& params,
                                                     const ReductionSizes& sizes) {
  check_reduction_params(params);
  const double N = static_cast<double>(params.universe);
  const double M = static_cast<double>(params.sets.size());
  const double K = static_cast<double>(sizes.isolated);
  const double L = static_cast<double>(sizes.chain);
  const double n = K + N * L + M;
  const double eps = sizes.slack;
  ReductionReport rep;
  rep.sizes = sizes;
  {
    const double lhs = (sizes.r - eps) * K + N * L;
    const double rhs = n / 2.0;
    rep.enough_isolated = {lhs, rhs, lhs - rhs, true, lhs > rhs};
  }
  {
    const double lhs = (params.beta - eps) * K;
    const double rhs = (N - 1.0) * L / 2.0 + M / 2.0;
    rep.missing_voters = {lhs, rhs, lhs - rhs, false, lhs >= rhs};
  }
  rep.size_bound_applies = N >= 35.0 / (params.beta * params.beta);
  rep.size_bound_pass = std::log(n) <= N * std::log(4.0);
  return rep;
}

inline ReductionReport verify_reduction_inequalities(const ReductionParams& params) {
  return verify_reduction_inequalities(params, reduction_sizes(params));
}

}  // namespace liquid
