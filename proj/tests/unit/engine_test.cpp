#include <gtest/gtest.h>

#include <algorithm>

#include "ammlab/engine.hpp"
#include "ammlab/error.hpp"
#include "ammlab/oracle.hpp"
#include "test_support.hpp"

using namespace ammlab;
using ammlab::testing::pool;

namespace {

A2mmRequest request(u128 in, Direction d = Direction::x_to_y, bool arb = true) {
  A2mmRequest r;
  r.direction = d;
  r.amount_in = Amount{in};
  r.arbitrage_enabled = arb;
  return r;
}

bool all_pairs_clear(const std::vector<PoolState>& pools) {
  for (std::size_t i = 0; i < pools.size(); ++i)
    for (std::size_t j = 0; j < pools.size(); ++j)
      if (i != j && (is_profitable(pools[i], pools[j]) || is_profitable(mirrored(pools[i]), mirrored(pools[j]))))
        return false;
  return true;
}

std::vector<PoolState> random_pools(Rng& rng, int n) {
  std::vector<PoolState> pools;
  for (int k = 0; k < n; ++k) {
    pools.push_back(pool("m" + std::to_string(k), rng.log_uniform_amount(1e6, 1e12).value(),
                         rng.log_uniform_amount(1e6, 1e12).value()));
  }
  return pools;
}

}  // namespace

TEST(Plan, SynchronizedPoolsRouteOnly) {
  std::vector<PoolState> pools{pool("a", 1'000'000, 3'000'000), pool("b", 2'000'000, 6'000'000)};
  BatchPlan bp = plan(request(5'000), pools);
  EXPECT_EQ(bp.leaf, Leaf::routing_only);
  for (const auto& leg : bp.legs) EXPECT_EQ(leg.source, LegSource::routing);
  EXPECT_EQ(bp.arb_profit, 0);
}

TEST(Plan, SmallSwapOnDesynchronizedPairArbitrages) {
  std::vector<PoolState> pools{pool("a", 1'000'000, 2'000'000), pool("b", 1'000'000, 1'000'000)};
  BatchPlan bp = plan(request(1'000), pools);
  EXPECT_EQ(bp.leaf, Leaf::routing_then_arbitrage);
  EXPECT_TRUE(std::any_of(bp.legs.begin(), bp.legs.end(),
                          [](const PlannedLeg& l) { return l.source == LegSource::arbitrage; }));
  EXPECT_GT(bp.arb_profit, 0);
  auto [after, rep] = execute(bp, pools);
  EXPECT_TRUE(all_pairs_clear(after));
  EXPECT_EQ(rep.amount_out, bp.expected_out);
  EXPECT_EQ(bp.counts.swaps, 2);
}

TEST(Plan, ArbitrageSwitchedOff) {
  std::vector<PoolState> pools{pool("a", 1'000'000, 2'000'000), pool("b", 1'000'000, 1'000'000)};
  BatchPlan bp = plan(request(1'000, Direction::x_to_y, false), pools);
  EXPECT_EQ(bp.leaf, Leaf::routing_arbitrage_disabled);
  EXPECT_EQ(bp.arb_profit, 0);
}

TEST(Plan, LargeSwapLevelsByItself) {
  std::vector<PoolState> pools{pool("a", 1'000'000, 2'000'000), pool("b", 1'000'000, 1'000'000)};
  BatchPlan bp = plan(request(600'000), pools);
  EXPECT_EQ(bp.leaf, Leaf::routing_only);
  EXPECT_EQ(bp.expected_out, Amount{756'743});
}

TEST(Plan, SandwichGuardSkipsArbitrage) {
  std::vector<PoolState> pools{pool("a", 1'000'000, 2'000'000), pool("b", 1'000'000, 1'000'000)};
  EngineOptions opt;
  opt.sandwichable = [](const A2mmRequest& r, const std::vector<PoolState>&) { return r.amount_in >= Amount{500}; };
  BatchPlan bp = plan(request(1'000), pools, opt);
  EXPECT_EQ(bp.leaf, Leaf::sandwich_guard);
  EXPECT_EQ(bp.arb_profit, 0);
  EXPECT_EQ(plan(request(100), pools, opt).leaf, Leaf::routing_then_arbitrage);
}

TEST(Plan, EveryRequestLandsInOneLeafProperty) {
  Rng rng(501);
  for (int i = 0; i < 300; ++i) {
    std::vector<PoolState> pools = random_pools(rng, 1 + static_cast<int>(rng.below(4)));
    A2mmRequest r = request(rng.log_uniform_amount(1, 1e11).value(), rng.chance(0.5) ? Direction::x_to_y : Direction::y_to_x,
                            rng.chance(0.8));
    EngineOptions opt;
    const bool guard = rng.chance(0.2);
    opt.sandwichable = [guard](const A2mmRequest&, const std::vector<PoolState>&) { return guard; };
    BatchPlan bp = plan(r, pools, opt);
    // The leaf predicate is recomputed from the plan alone.
    Leaf expect = guard                                   ? Leaf::sandwich_guard
                  : r.amount_in >= bp.leveling_volume     ? Leaf::routing_only
                  : r.arbitrage_enabled                   ? Leaf::routing_then_arbitrage
                                                          : Leaf::routing_arbitrage_disabled;
    EXPECT_EQ(bp.leaf, expect);
    if (bp.leaf != Leaf::routing_then_arbitrage) {
      EXPECT_EQ(bp.arb_profit, 0);
    }
  }
}

TEST(Compression, BatchEqualsSequentialProperty) {
  Rng rng(502);
  for (int i = 0; i < 200; ++i) {
    std::vector<PoolState> pools = random_pools(rng, 2 + static_cast<int>(rng.below(4)));
    A2mmRequest r = request(rng.log_uniform_amount(1, 1e9).value(), rng.chance(0.5) ? Direction::x_to_y : Direction::y_to_x);
    BatchPlan bp = plan(r, pools);
    auto [batched, rep] = execute(bp, pools);
    EXPECT_EQ(batched, execute_sequential(bp.legs, pools));
    EXPECT_LE(static_cast<std::size_t>(bp.counts.swaps), pools.size());
  }
}

TEST(Execute, NetOrderDoesNotMatter) {
  Rng rng(503);
  for (int i = 0; i < 100; ++i) {
    std::vector<PoolState> pools = random_pools(rng, 3);
    BatchPlan bp = plan(request(rng.log_uniform_amount(1, 1e8).value()), pools);
    auto first = execute(bp, pools).first;
    std::reverse(bp.net.begin(), bp.net.end());
    EXPECT_EQ(execute(bp, pools).first, first);
  }
}

TEST(Execute, EmptyPlanIsIdentity) {
  std::vector<PoolState> pools{pool("a", 10, 10)};
  BatchPlan bp;
  auto [after, rep] = execute(bp, pools);
  EXPECT_EQ(after, pools);
  EXPECT_EQ(rep.legs_executed, 0);
}

TEST(Execute, AbortLeavesPoolsUntouched) {
  std::vector<PoolState> pools{pool("a", 1'000'000, 1'000'000), pool("b", 1'000'000, 1'000'000)};
  const std::vector<PoolState> before = pools;
  A2mmRequest r = request(100'000);
  r.min_amount_out = Amount{10'000'000};
  BatchPlan bp = plan(r, pools);
  try {
    execute(bp, pools);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::swap_reverted);
  }
  EXPECT_EQ(pools, before);
}

TEST(NetSwap, AsAction) {
  NetSwap n{"a", 100, -90};
  SwapAction a = n.as_action();
  EXPECT_EQ(a.direction, Direction::x_to_y);
  EXPECT_EQ(a.amount_in, Amount{100});
  EXPECT_EQ(a.min_amount_out, Amount{90});
  SwapAction b = NetSwap{"b", -5, 7}.as_action();
  EXPECT_EQ(b.direction, Direction::y_to_x);
  EXPECT_EQ(b.amount_in, Amount{7});
}

TEST(CostUnits, Weights) {
  EXPECT_DOUBLE_EQ(cost_units({1, 0, 2}, 0), 2.4242);
  EXPECT_NEAR(cost_units({2, 1, 3}, 0) * 100, 402.64, 1e-9);
}

namespace {

std::vector<StreamItem> stream_of(Rng& rng, const std::vector<PoolState>& pools, int n) {
  std::vector<StreamItem> s;
  for (int i = 0; i < n; ++i) {
    StreamRecord rec;
    rec.seq = static_cast<std::uint64_t>(i);
    rec.market_hint = pools[rng.below(pools.size())].market_id;
    rec.request = request(rng.log_uniform_amount(1e2, 1e6).value(), rng.chance(0.5) ? Direction::x_to_y : Direction::y_to_x);
    s.push_back({rec, rec.seq, {}});
  }
  return s;
}

}  // namespace

TEST(Replay, SynchronizedStreamNeverLosesToTheHintedPool) {
  Rng rng(504);
  std::vector<PoolState> pools{pool("a", 1'000'000'000, 3'000'000'000), pool("b", 500'000'000, 1'500'000'000),
                               pool("c", 2'000'000'000, 6'000'000'000)};
  auto stream = stream_of(rng, pools, 200);
  for (const auto& e : replay(stream, pools, ReplayMode::a2mm)) {
    ASSERT_TRUE(e.ok) << e.error;
    EXPECT_GE(e.amount_out, e.amm_out);
  }
}

TEST(Replay, SinglePoolModesAgree) {
  Rng rng(505);
  std::vector<PoolState> pools{pool("a", 1'000'000'000, 3'000'000'000)};
  auto stream = stream_of(rng, pools, 100);
  std::vector<PoolState> fa, fb;
  auto amm = replay(stream, pools, ReplayMode::amm, {}, &fa);
  auto a2mm = replay(stream, pools, ReplayMode::a2mm, {}, &fb);
  ASSERT_EQ(amm.size(), a2mm.size());
  for (std::size_t i = 0; i < amm.size(); ++i) EXPECT_EQ(amm[i].amount_out, a2mm[i].amount_out);
  EXPECT_EQ(fa, fb);
}

TEST(Replay, MixedStreamGainsAreNonNegative) {
  Rng rng(506);
  std::vector<PoolState> pools = random_pools(rng, 4);
  auto stream = stream_of(rng, pools, 200);
  i128 total = 0;
  for (const auto& e : replay(stream, pools, ReplayMode::a2mm)) {
    if (!e.ok) continue;
    EXPECT_GE(e.routing_gain, 0);
    EXPECT_GE(e.arb_profit, 0);
    total += e.routing_gain + e.arb_profit;
  }
  EXPECT_GE(total, 0);
}

TEST(Replay, MalformedLinesAreReportedInPlace) {
  std::vector<PoolState> pools{pool("a", 1000, 1000)};
  std::vector<StreamItem> s{{std::nullopt, 3, "bad json"}};
  auto out = replay(s, pools, ReplayMode::a2mm);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_FALSE(out[0].ok);
  EXPECT_EQ(out[0].seq, 3u);
}
