#include <gtest/gtest.h>

#include <cmath>

#include "ammlab/arbitrage.hpp"
#include "ammlab/oracle.hpp"
#include "ammlab/routing.hpp"
#include "test_support.hpp"

using namespace ammlab;
using ammlab::testing::pool;

TEST(BruteRoute, SinglePoolTakesEverything) {
  BruteRouteResult r = brute_route({pool("a", 1'000'000, 1'000'000)}, Direction::x_to_y, Amount{100'000});
  ASSERT_EQ(r.split.size(), 1u);
  EXPECT_EQ(r.split[0], Amount{100'000});
  EXPECT_EQ(r.output, Amount{90'661});
}

TEST(BruteRoute, IdenticalPoolsSplitInHalf) {
  BruteRouteResult r = brute_route({pool("a", 1'000'000, 1'000'000), pool("b", 1'000'000, 1'000'000)},
                                   Direction::x_to_y, Amount{200'000});
  ASSERT_EQ(r.split.size(), 2u);
  EXPECT_EQ(r.split[0] + r.split[1], Amount{200'000});
  // Floors make the integer optimum bumpy; the even split is within a unit.
  const Amount even = quote(pool("a", 1'000'000, 1'000'000), Direction::x_to_y, Amount{100'000}) * Amount{2};
  EXPECT_LE(r.output, even + Amount{1});
  EXPECT_LE(std::llabs(static_cast<long long>(r.split[0].value()) - 100'000), 200);
}

TEST(BruteRoute, AgreesWithRouteOnTheExample) {
  std::vector<PoolState> pools{pool("a", 1'000'000, 2'000'000), pool("b", 1'000'000, 1'000'000)};
  BruteRouteResult r = brute_route(pools, Direction::x_to_y, Amount{600'000});
  const Amount fast = route(pools, Direction::x_to_y, Amount{600'000}).expected_total_out;
  EXPECT_LT(std::fabs(static_cast<double>(to_long_double(r.output) / to_long_double(fast) - 1)), 5e-4);
  EXPECT_EQ(evaluate_split(pools, Direction::x_to_y, r.split), r.output);
}

TEST(BruteRoute, ThreePools) {
  Rng rng(601);
  for (int i = 0; i < 10; ++i) {
    RouteInstance inst = random_route_instance(rng, 3);
    BruteRouteResult r = brute_route(inst.pools, Direction::x_to_y, inst.total_in);
    Amount sum;
    for (Amount a : r.split) sum += a;
    EXPECT_EQ(sum, inst.total_in);
    EXPECT_EQ(evaluate_split(inst.pools, Direction::x_to_y, r.split), r.output);
  }
}

TEST(BruteRoute, RejectsFourPools) {
  std::vector<PoolState> pools(4, pool("a", 10, 10));
  EXPECT_THROW(brute_route(pools, Direction::x_to_y, Amount{5}), Error);
}

TEST(BruteArb, Example) {
  BruteArbResult r = brute_arb(pool("a", 1'000'000, 2'000'000), pool("b", 1'000'000, 1'000'000));
  EXPECT_LE(r.plateau_lo, Amount{137'343});
  EXPECT_GE(r.plateau_hi, Amount{137'343});
  EXPECT_GE(r.argmax, r.plateau_lo);
  EXPECT_LE(r.argmax, r.plateau_hi);
  EXPECT_EQ(r.profit, i128{56'306});
  EXPECT_EQ(round_trip_profit(pool("a", 1'000'000, 2'000'000), pool("b", 1'000'000, 1'000'000), Amount{137'342}),
            r.profit);
  EXPECT_TRUE(r.unimodal);
}

TEST(BruteArb, UnprofitablePairNeverGains) {
  BruteArbResult r = brute_arb(pool("a", 1'000'000, 1'000'000), pool("b", 1'000'000, 1'000'000));
  EXPECT_LE(r.profit, 0);
}

TEST(BruteArb, MatchesClosedFormOnRandomPairs) {
  Rng rng(602);
  for (int i = 0; i < 50; ++i) {
    auto [p1, p2] = random_profitable_pair(rng);
    BruteArbResult r = brute_arb(p1, p2);
    EXPECT_TRUE(r.unimodal);
    const i128 closed = round_trip_profit(p1, p2, optimal_input(p1, p2));
    EXPECT_GE(closed, r.profit) << i;
    EXPECT_LE(static_cast<double>(closed - r.profit), 1e-4 * static_cast<double>(r.profit)) << i;
  }
}

TEST(BruteArb, Deterministic) {
  Rng a(603), b(603);
  auto pa = random_profitable_pair(a);
  auto pb = random_profitable_pair(b);
  BruteArbResult ra = brute_arb(pa.first, pa.second), rb = brute_arb(pb.first, pb.second);
  EXPECT_EQ(ra.argmax, rb.argmax);
  EXPECT_EQ(ra.profit, rb.profit);
  EXPECT_EQ(ra.evaluations, rb.evaluations);
}

TEST(BruteSync, MatchesClosedForm) {
  Rng rng(604);
  for (int i = 0; i < 50; ++i) {
    RouteInstance inst = random_route_instance(rng, 2);
    const bool first_rich = compare_price(inst.pools[0], inst.pools[1], Direction::x_to_y) > 0;
    const PoolState& rich = inst.pools[first_rich ? 0 : 1];
    const PoolState& poor = inst.pools[first_rich ? 1 : 0];
    const Amount brute = brute_sync_threshold(rich, poor, Direction::x_to_y);
    const long double real = sync_threshold_real(rich, poor, Direction::x_to_y);
    EXPECT_LE(std::fabs(static_cast<double>(to_long_double(brute) - real)), 1.0 + 1e-9L * real) << i;
  }
}

TEST(Generators, ProfitablePairsAreProfitable) {
  Rng rng(605);
  for (int i = 0; i < 500; ++i) {
    auto [p1, p2] = random_profitable_pair(rng);
    EXPECT_TRUE(is_profitable(p1, p2));
    EXPECT_GT(round_trip_profit(p1, p2, optimal_input(p1, p2)), 0);
  }
}

TEST(Objective, ParseRoundTrip) {
  for (Objective o : {Objective::route_output, Objective::arb_profit, Objective::price_gap}) {
    EXPECT_EQ(parse_objective(to_string(o)), o);
  }
  EXPECT_THROW(parse_objective("nope"), Error);
}
