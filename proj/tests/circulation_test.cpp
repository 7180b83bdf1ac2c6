#include <gtest/gtest.h>

#include <cmath>

#include "liquid/circulation.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace liquid;
using liquid::testing::feasible_by_cuts;
using liquid::testing::worst_violation;

namespace {

// Random network with integer or fractional demands that sum to zero.
FlowNetwork random_flow_network(std::size_t n, Rng& rng, bool fractional) {
  FlowNetwork net;
  net.demands.assign(n, 0.0);
  for (int k = 0; k < static_cast<int>(n); ++k) {
    const std::size_t u = rng.index(n), v = rng.index(n);
    const double amount = fractional ? rng.uniform01() : static_cast<double>(rng.index(4));
    net.demands[u] -= amount;
    net.demands[v] += amount;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && rng.bernoulli(0.3)) {
        net.arcs.push_back({i, j, fractional ? 2.0 * rng.uniform01()
                                             : static_cast<double>(rng.index(4))});
      }
    }
  }
  return net;
}

}  // namespace

TEST(Circulation, ZeroDemands) {
  FlowNetwork net{{0.0, 0.0, 0.0}, {{0, 1, 1.0}, {1, 2, 1.0}}};
  const auto res = feasible_circulation(net);
  ASSERT_TRUE(res.feasible);
  for (double f : res.flow) EXPECT_EQ(f, 0.0);
}

TEST(Circulation, SingleArc) {
  FlowNetwork net{{-1.0, 1.0}, {{0, 1, 1.0}}};
  const auto res = feasible_circulation(net);
  ASSERT_TRUE(res.feasible);
  EXPECT_TRUE(res.exact);
  EXPECT_DOUBLE_EQ(res.flow[0], 1.0);
}

TEST(Circulation, UnbalancedDemands) {
  FlowNetwork net{{-1.0, 1.5}, {{0, 1, 5.0}}};
  const auto res = feasible_circulation(net);
  EXPECT_FALSE(res.feasible);
  EXPECT_EQ(res.reason, "demands do not sum to zero");
}

TEST(Circulation, BadCapacity) {
  EXPECT_THROW(feasible_circulation({{0.0, 0.0}, {{0, 1, -1.0}}}), Error);
  EXPECT_THROW(feasible_circulation({{0.0, 0.0}, {{0, 1, INFINITY}}}), Error);
}

TEST(Circulation, CapacityTooSmall) {
  FlowNetwork net{{-2.0, 2.0}, {{0, 1, 1.0}}};
  EXPECT_FALSE(feasible_circulation(net).feasible);
  EXPECT_FALSE(feasible_by_cuts(net));
}

TEST(Circulation, AgreesWithCutEnumeration) {
  Rng rng(113);
  for (int trial = 0; trial < 300; ++trial) {
    const bool fractional = trial % 2 == 1;
    const auto net = random_flow_network(2 + rng.index(7), rng, fractional);
    const auto res = feasible_circulation(net);
    EXPECT_EQ(res.feasible, feasible_by_cuts(net)) << "trial " << trial;
    if (res.feasible) {
      EXPECT_LE(worst_violation(net, res.flow), 1e-9);
    }
  }
}

TEST(Circulation, IrrationalValuesUseFloatingPath) {
  FlowNetwork net{{-std::sqrt(2.0), 0.0, std::sqrt(2.0)},
                  {{0, 1, std::sqrt(3.0)}, {1, 2, std::sqrt(3.0)}}};
  const auto res = feasible_circulation(net);
  ASSERT_TRUE(res.feasible);
  EXPECT_FALSE(res.exact);
  EXPECT_LE(worst_violation(net, res.flow), 1e-9);
}

TEST(Circulation, ScalingPreservesVerdict) {
  Rng rng(127);
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = random_flow_network(2 + rng.index(7), rng, trial % 2 == 0);
    const bool verdict = feasible_circulation(net).feasible;
    for (double c : {0.001, 3.0, 1000.0}) {
      FlowNetwork scaled = net;
      for (double& d : scaled.demands) d *= c;
      for (auto& a : scaled.arcs) a.capacity *= c;
      EXPECT_EQ(feasible_circulation(scaled).feasible, verdict) << "trial " << trial;
    }
  }
}

TEST(Feasdel, UniformNeedsNoDelegation) {
  const auto net = liquid::testing::example_network();
  const auto res = feasdel(net, std::vector<double>(7, 1.0 / 7.0));
  ASSERT_TRUE(res.feasible);
  for (double w : res.weight) EXPECT_NEAR(w, 0.0, 1e-12);
}

TEST(Feasdel, Path) {
  SocialNetwork net({0.5, 0.5, 0.5}, {{0, 1}, {1, 2}});
  const auto res = feasdel(net, {0.0, 0.0, 1.0});
  ASSERT_TRUE(res.feasible);
  ASSERT_EQ(res.arcs.size(), 2U);
  EXPECT_EQ(res.arcs[0], (Arc{0, 1}));
  EXPECT_NEAR(res.weight[0], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(res.weight[1], 2.0 / 3.0, 1e-12);
}

TEST(Feasdel, Disconnected) {
  SocialNetwork net({0.5, 0.5}, {});
  EXPECT_FALSE(feasdel(net, {0.0, 1.0}).feasible);
}

TEST(Feasdel, BadTargets) {
  SocialNetwork net({0.5, 0.5}, {{0, 1}});
  EXPECT_THROW(feasdel(net, {0.5, 0.6}), Error);
  EXPECT_THROW(feasdel(net, {-0.5, 1.5}), Error);
  EXPECT_THROW(feasdel(net, {1.0}), Error);
}

TEST(Feasdel, IntegralDelegationsAreFeasible) {
  Rng rng(131);
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = liquid::testing::random_network(2 + rng.index(30), 0.2, rng);
    const auto d = liquid::testing::random_delegation(net, rng);
    std::vector<double> target(net.size(), 0.0);
    for (const auto& g : guru_profile(net, d).gurus) {
      target[g.voter] = static_cast<double>(g.weight) / static_cast<double>(net.size());
    }
    const auto res = feasdel(net, target);
    EXPECT_TRUE(res.feasible);
  }
}
