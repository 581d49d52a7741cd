#include <gtest/gtest.h>

#include "ammlab/error.hpp"
#include "ammlab/oracle.hpp"
#include "ammlab/pool.hpp"
#include "ammlab/random.hpp"
#include "test_support.hpp"

using namespace ammlab;
using ammlab::testing::pool;

namespace {

template <class F>
Errc code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;
}

SwapAction buy_y(Amount in, Amount min_out = {}) { return {"a", Direction::x_to_y, in, min_out}; }

}  // namespace

TEST(Quote, MillionPoolExample) {
  EXPECT_EQ(quote(pool("a", 1'000'000, 1'000'000), Direction::x_to_y, Amount{100'000}), Amount{90'661});
}

TEST(Quote, ExampleIsTheLargestOutputKeepingTheInvariant) {
  // x*y must not fall once the fee-adjusted input is counted.
  auto keeps = [](u128 out) {
    BigInt lhs = (BigInt(1'000'000) * 1000 + BigInt(100'000) * 997) * (BigInt(1'000'000) - BigInt(out));
    return lhs >= BigInt(1'000'000) * 1'000'000 * 1000;
  };
  EXPECT_TRUE(keeps(90'661));
  EXPECT_FALSE(keeps(90'662));
}

TEST(Quote, ZeroInputIsRejected) {
  EXPECT_EQ(code_of([] { quote(pool("a", 1'000'000, 1'000'000), Direction::x_to_y, Amount{}); }),
            Errc::precondition);
}

TEST(Quote, InactivePoolIsRejected) {
  PoolState p;
  p.market_id = "dead";
  p.x = Amount{10};
  EXPECT_EQ(code_of([&] { quote(p, Direction::x_to_y, Amount{1}); }), Errc::invalid_pool);
}

TEST(Quote, RoundTripLosesProperty) {
  Rng rng(101);
  for (int i = 0; i < 2000; ++i) {
    PoolState p = pool("a", rng.log_uniform_amount(1e3, 1e15).value(), rng.log_uniform_amount(1e3, 1e15).value());
    Amount in = rng.log_uniform_amount(1, to_long_double(p.x));
    Amount out = quote(p, Direction::x_to_y, in);
    if (out.is_zero()) continue;
    SwapResult r = apply_swap(p, buy_y(in));
    EXPECT_LT(quote(r.pool, Direction::y_to_x, out), in);
  }
}

TEST(ApplySwap, ExampleState) {
  SwapResult r = apply_swap(pool("a", 1'000'000, 1'000'000), buy_y(Amount{100'000}, Amount{90'661}));
  EXPECT_EQ(r.amount_out, Amount{90'661});
  EXPECT_EQ(r.pool.x, Amount{1'100'000});
  EXPECT_EQ(r.pool.y, Amount{909'339});
}

TEST(ApplySwap, MinimumOutputReverts) {
  EXPECT_EQ(code_of([] { apply_swap(pool("a", 1'000'000, 1'000'000), buy_y(Amount{100'000}, Amount{90'662})); }),
            Errc::swap_reverted);
}

TEST(ApplySwap, InvariantNeverDecreasesProperty) {
  Rng rng(102);
  for (int i = 0; i < 2000; ++i) {
    PoolState p = pool("a", rng.log_uniform_amount(1e2, 1e18).value(), rng.log_uniform_amount(1e2, 1e18).value());
    Direction d = rng.chance(0.5) ? Direction::x_to_y : Direction::y_to_x;
    Amount in = rng.log_uniform_amount(1, 2 * to_long_double(p.reserve_in(d)));
    SwapResult r = apply_swap(p, {"a", d, in, {}});
    EXPECT_GE(invariant(r.pool), invariant(p));
  }
}

TEST(ApplySwap, PathIndependenceWithinOneUnitWithoutFeeProperty) {
  Rng rng(103);
  for (int i = 0; i < 2000; ++i) {
    PoolState p = make_pool("a", rng.log_uniform_amount(1e3, 1e12).value(), rng.log_uniform_amount(1e3, 1e12).value(),
                            FeeRate{1, 1});
    Amount a = rng.log_uniform_amount(1, to_long_double(p.x));
    Amount b = rng.log_uniform_amount(1, to_long_double(p.x));
    SwapResult one = apply_swap(p, buy_y(a + b));
    SwapResult second = apply_swap(apply_swap(p, buy_y(a)).pool, buy_y(b));
    ASSERT_EQ(one.pool.x, second.pool.x);
    const i128 gap = signed_diff(one.pool.y, second.pool.y);
    EXPECT_GE(gap, -1);
    EXPECT_LE(gap, 1);
  }
}

TEST(ApplySwap, SplitSwapsNeverBeatOneSwapProperty) {
  Rng rng(109);
  for (int i = 0; i < 2000; ++i) {
    PoolState p = pool("a", rng.log_uniform_amount(1e3, 1e12).value(), rng.log_uniform_amount(1e3, 1e12).value());
    Amount a = rng.log_uniform_amount(1, to_long_double(p.x));
    Amount b = rng.log_uniform_amount(1, to_long_double(p.x));
    SwapResult one = apply_swap(p, buy_y(a + b));
    SwapResult first = apply_swap(p, buy_y(a));
    SwapResult second = apply_swap(first.pool, buy_y(b));
    EXPECT_LE(first.amount_out + second.amount_out, one.amount_out + Amount{1});
  }
}

TEST(ApplySwap, PathIndependenceIsExactInRationalsWithoutFee) {
  Rng rng(104);
  for (int i = 0; i < 200; ++i) {
    PoolState p = make_pool("a", rng.log_uniform_amount(1e3, 1e12).value(), rng.log_uniform_amount(1e3, 1e12).value(),
                            FeeRate{1, 1});
    Rational a(to_big(rng.log_uniform_amount(1, 1e9)));
    Rational b(to_big(rng.log_uniform_amount(1, 1e9)));
    RationalPool one = to_rational(p), two = to_rational(p);
    Rational whole = rational_apply(one, Direction::x_to_y, a + b);
    Rational parts = rational_apply(two, Direction::x_to_y, a);
    parts += rational_apply(two, Direction::x_to_y, b);
    EXPECT_EQ(whole, parts);
    EXPECT_EQ(one.y, two.y);
  }
}

TEST(ApplySwap, SplittingNeverPaysWithFeeInThePool) {
  Rng rng(108);
  for (int i = 0; i < 200; ++i) {
    PoolState p = pool("a", rng.log_uniform_amount(1e3, 1e12).value(), rng.log_uniform_amount(1e3, 1e12).value());
    Rational a(to_big(rng.log_uniform_amount(1, 1e9)));
    Rational b(to_big(rng.log_uniform_amount(1, 1e9)));
    RationalPool one = to_rational(p), two = to_rational(p);
    Rational whole = rational_apply(one, Direction::x_to_y, a + b);
    Rational parts = rational_apply(two, Direction::x_to_y, a);
    parts += rational_apply(two, Direction::x_to_y, b);
    EXPECT_LT(parts, whole);
  }
}

TEST(MarginalPrice, Examples) {
  EXPECT_EQ(marginal_price(pool("a", 1'000'000, 2'000'000), Direction::x_to_y), Rational(2));
  EXPECT_EQ(marginal_price(pool("a", 5, 5), Direction::x_to_y), Rational(1));
  EXPECT_EQ(marginal_price(pool("a", 1'000'000, 2'000'000), Direction::y_to_x), Rational(1, 2));
}

TEST(MarginalPrice, FallsAfterEverySwapProperty) {
  Rng rng(105);
  for (int i = 0; i < 1000; ++i) {
    PoolState p = pool("a", rng.log_uniform_amount(1e3, 1e12).value(), rng.log_uniform_amount(1e3, 1e12).value());
    Amount in = rng.log_uniform_amount(1, to_long_double(p.x));
    if (quote(p, Direction::x_to_y, in).is_zero()) continue;
    EXPECT_LT(marginal_price(apply_swap(p, buy_y(in)).pool, Direction::x_to_y), marginal_price(p, Direction::x_to_y));
  }
}

TEST(Quote, EffectiveRateFallsWithSizeProperty) {
  // Exact rates fall strictly; floored quotes may lag by one unit.
  Rng rng(106);
  for (int i = 0; i < 100; ++i) {
    PoolState p = pool("a", rng.log_uniform_amount(1e9, 1e15).value(), rng.log_uniform_amount(1e9, 1e15).value());
    Amount prev_in{100'000};
    Rational prev_exact = rational_swap(p, buy_y(prev_in));
    Amount prev_out = quote(p, Direction::x_to_y, prev_in);
    for (int k = 0; k < 60; ++k) {
      Amount in = prev_in + rng.log_uniform_amount(1e5, 1e8);
      Rational exact = rational_swap(p, buy_y(in));
      EXPECT_LT(exact * Rational(to_big(prev_in)), prev_exact * Rational(to_big(in)));
      Amount out = quote(p, Direction::x_to_y, in);
      EXPECT_LE(to_big(out) * to_big(prev_in), (to_big(prev_out) + 1) * to_big(in));
      prev_in = in;
      prev_exact = exact;
      prev_out = out;
    }
  }
}

TEST(RationalSwap, ExactFraction) {
  Rational r = rational_swap(pool("a", 1'000'000, 1'000'000), buy_y(Amount{100'000}));
  EXPECT_EQ(r, Rational(BigInt(99'700) * 1'000'000, BigInt(1'099'700)));
  EXPECT_NEAR(static_cast<double>(to_long_double(r)), 90'661.0893, 1e-4);
}

TEST(RationalSwap, FloorMatchesIntegerQuoteProperty) {
  Rng rng(107);
  for (int i = 0; i < 100'000; ++i) {
    PoolState p = pool("a", rng.log_uniform_amount(1, 1e15).value(), rng.log_uniform_amount(1, 1e15).value());
    Amount in = rng.log_uniform_amount(1, 1e15);
    Rational r = rational_swap(p, buy_y(in));
    BigInt fl = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
    ASSERT_EQ(amount_from_big(fl), quote(p, Direction::x_to_y, in));
  }
}

TEST(ApplyNetDelta, MatchesSwap) {
  PoolState p = pool("a", 1'000'000, 1'000'000);
  PoolState q = apply_net_delta(p, 100'000, -90'661);
  EXPECT_EQ(q, apply_swap(p, buy_y(Amount{100'000})).pool);
  EXPECT_EQ(code_of([&] { apply_net_delta(p, 100'000, -90'662); }), Errc::swap_reverted);
}
