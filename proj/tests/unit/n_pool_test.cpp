#include <gtest/gtest.h>

#include "ammlab/arbitrage.hpp"
#include "ammlab/error.hpp"
#include "ammlab/oracle.hpp"
#include "test_support.hpp"

using namespace ammlab;
using ammlab::testing::cascade_universe;
using ammlab::testing::pool;

namespace {

bool all_pairs_clear(const std::vector<PoolState>& pools) {
  for (std::size_t i = 0; i < pools.size(); ++i)
    for (std::size_t j = 0; j < pools.size(); ++j)
      if (i != j && (is_profitable(pools[i], pools[j]) || is_profitable(mirrored(pools[i]), mirrored(pools[j]))))
        return false;
  return true;
}

}  // namespace

TEST(NPool, TwoPoolsReduceToTheTwoPointTrade) {
  // Y profit: buy X with Y on the pool where X is cheap in Y.
  PoolState a = pool("a", 2'000'000, 1'000'000), b = pool("b", 1'000'000, 1'000'000);
  NPoolResult r = n_pool_arbitrage({a, b});
  ASSERT_EQ(r.corrections, 0);
  const Amount d = optimal_input(mirrored(a), mirrored(b));
  TwoPointResult tp = execute_two_point(mirrored(a), mirrored(b), d);
  EXPECT_EQ(r.pools[0], mirrored(tp.pool1));
  EXPECT_EQ(r.pools[1], mirrored(tp.pool2));
  EXPECT_EQ(r.profit, tp.profit);
  EXPECT_EQ(r.profit, i128{56'306});
  EXPECT_EQ(r.counts, (OperationCounts{1, 0, 2}));
}

TEST(NPool, ThreePoolsPartialStepThenFinish) {
  // Middle pool sits close to the cheap end: the full trade would overshoot it.
  std::vector<PoolState> pools{pool("lo", 1'000'000'000, 1'000'000'000), pool("mid", 10'000'000, 10'200'000),
                               pool("hi", 1'000'000'000, 2'000'000'000)};
  NPoolResult r = n_pool_arbitrage(pools);
  EXPECT_EQ(r.counts, (OperationCounts{2, 1, 3}));
  EXPECT_EQ(r.iterations, 2);
  EXPECT_GT(r.profit, 0);
  EXPECT_TRUE(all_pairs_clear(r.pools));
}

TEST(NPool, ProfitAssetX) {
  std::vector<PoolState> pools{pool("a", 1'000'000, 2'000'000), pool("b", 1'000'000, 1'000'000)};
  NPoolResult r = n_pool_arbitrage(pools, Asset::x);
  EXPECT_EQ(r.profit, i128{56'306});
  EXPECT_EQ(r.profit_asset, Asset::x);
  EXPECT_TRUE(all_pairs_clear(r.pools));
}

TEST(NPool, LegsReplayToFinalStates) {
  Rng rng(401);
  for (int i = 0; i < 50; ++i) {
    std::vector<PoolState> pools = cascade_universe(rng, 3 + static_cast<int>(rng.below(4)));
    NPoolResult r = n_pool_arbitrage(pools, rng.chance(0.5) ? Asset::x : Asset::y);
    std::vector<PoolState> state = pools;
    for (const auto& leg : r.legs) {
      for (auto& p : state) {
        if (p.market_id == leg.market_id) p = apply_swap(p, {leg.market_id, leg.direction, leg.amount_in, {}}).pool;
      }
    }
    EXPECT_EQ(state, r.pools);
  }
}

TEST(NPool, FixedPointProperty) {
  Rng rng(402);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + static_cast<int>(rng.below(6));
    std::vector<PoolState> pools;
    for (int k = 0; k < n; ++k) {
      pools.push_back(pool("p" + std::to_string(k), rng.log_uniform_amount(1e5, 1e12).value(),
                           rng.log_uniform_amount(1e5, 1e12).value()));
    }
    NPoolResult r = n_pool_arbitrage(pools);
    EXPECT_TRUE(all_pairs_clear(r.pools)) << i;
    EXPECT_LE(r.counts.swaps, n);
    EXPECT_GE(r.profit, 0);
  }
}

TEST(NPool, CascadeMatchesPredictedCounts) {
  Rng rng(403);
  for (int i = 0; i < 60; ++i) {
    const int n = 3 + static_cast<int>(rng.below(4));
    NPoolResult r = n_pool_arbitrage(cascade_universe(rng, n));
    EXPECT_EQ(r.counts, predicted_counts(n)) << "n=" << n << " case " << i;
    EXPECT_TRUE(all_pairs_clear(r.pools));
  }
}

TEST(NPool, SynchronizedUniverseIsUntouched) {
  std::vector<PoolState> pools{pool("a", 1000, 3000), pool("b", 2000, 6000), pool("c", 5000, 15000)};
  NPoolResult r = n_pool_arbitrage(pools);
  EXPECT_EQ(r.pools, pools);
  EXPECT_TRUE(r.legs.empty());
  EXPECT_EQ(r.counts.swaps, 0);
}

TEST(NPool, Preconditions) {
  EXPECT_THROW(n_pool_arbitrage({pool("a", 10, 10)}), Error);
  EXPECT_THROW(n_pool_arbitrage({pool("a", 10, 10), pool("a", 10, 20)}), Error);
  EXPECT_THROW(n_pool_arbitrage({pool("a", 10, 10), make_pool("b", 10, 20, FeeRate{995, 1000})}), Error);
}

TEST(Aggregate, SumsReserves) {
  VirtualPool v = aggregate({pool("a", 10, 20), pool("b", 30, 40)});
  EXPECT_EQ(v.x, Amount{40});
  EXPECT_EQ(v.y, Amount{60});
  EXPECT_EQ(v.members, (std::vector<std::string>{"a", "b"}));
}
