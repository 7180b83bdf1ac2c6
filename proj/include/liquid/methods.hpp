// methods.hpp
//
// Named delegation methods, as used by the CLI and the experiment harness.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "liquid/exact.hpp"
#include "liquid/strategies.hpp"

namespace liquid {

enum class Method {
  kDirect,
  kBestGuru,
  kGreedyGr,
  kGreedyVo,
  kLsGr,
  kLsVo,
  kGreedyCap,
  kEmerging,
  kExact,
};

inline constexpr std::array<std::pair<Method, std::string_view>, 9> kMethodNames{{
    {Method::kDirect, "direct"},
    {Method::kBestGuru, "best_guru"},
    {Method::kGreedyGr, "greedy_gr"},
    {Method::kGreedyVo, "greedy_vo"},
    {Method::kLsGr, "ls_gr"},
    {Method::kLsVo, "ls_vo"},
    {Method::kGreedyCap, "greedy_cap"},
    {Method::kEmerging, "emerging"},
    {Method::kExact, "exact"},
}};

inline std::string_view method_name(Method m) {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  for (const auto& [method, n] : kMethodNames) {
    if (n == name) return method;
  }
  throw Error("unknown method '" + std::string(name) + "'");
}

// Runs one method on net (whose accuracies are whatever the method is allowed
// to see). Local search starts from the greedy result with the same
// assignment rule. `seed` drives the emerging mechanism only.
inline Delegation run_method(const SocialNetwork& net, Method method,
                             const StrategyParams& params, unsigned threads = 1) {
  switch (method) {
    case Method::kDirect:
      return direct_democracy(net);
    case Method::kBestGuru:
      return best_guru(net);
    case Method::kGreedyGr:
      return greedy_strategy(net, Assigner::kGreedy, params);
    case Method::kGreedyVo:
      return greedy_strategy(net, Assigner::kVoronoi, params);
    case Method::kLsGr:
      return local_search_strategy(net, greedy_strategy(net, Assigner::kGreedy, params),
                                   Assigner::kGreedy, params);
    case Method::kLsVo:
      return local_search_strategy(net, greedy_strategy(net, Assigner::kVoronoi, params),
                                   Assigner::kVoronoi, params);
    case Method::kGreedyCap:
      return greedy_cap(net, params);
    case Method::kEmerging: {
      Rng rng(params.seed);
      return emerging(net, rng);
    }
    case Method::kExact:
      return exhaustive_optimum(net, threads).delegation;
  }
  throw Error("unknown method");
}

}  // namespace liquid
