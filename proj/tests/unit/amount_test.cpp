#include <gtest/gtest.h>

#include "ammlab/amount.hpp"
#include "ammlab/error.hpp"
#include "ammlab/random.hpp"

using namespace ammlab;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;
}

}  // namespace

TEST(Amount, ParseAndPrintRoundTrip) {
  EXPECT_EQ(Amount::parse("0").str(), "0");
  EXPECT_EQ(Amount::parse("90661").value(), u128{90661});
  const std::string max = "340282366920938463463374607431768211455";
  EXPECT_EQ(Amount::parse(max).str(), max);
}

TEST(Amount, ParseRejectsGarbage) {
  EXPECT_EQ(code_of([] { Amount::parse(""); }), Errc::parse_error);
  EXPECT_EQ(code_of([] { Amount::parse("12a"); }), Errc::parse_error);
  EXPECT_EQ(code_of([] { Amount::parse("-1"); }), Errc::parse_error);
  EXPECT_EQ(code_of([] { Amount::parse("340282366920938463463374607431768211456"); }),
            Errc::arithmetic_overflow);
}

TEST(Amount, CheckedArithmetic) {
  const Amount max{kU128Max};
  EXPECT_EQ(code_of([&] { (void)(max + Amount{1}); }), Errc::arithmetic_overflow);
  EXPECT_EQ(code_of([] { (void)(Amount{1} - Amount{2}); }), Errc::arithmetic_overflow);
  EXPECT_EQ(code_of([&] { (void)(max * Amount{2}); }), Errc::arithmetic_overflow);
  EXPECT_EQ(Amount{7} * Amount{6}, Amount{42});
}

TEST(Amount, SignedHelpers) {
  EXPECT_EQ(signed_diff(Amount{3}, Amount{10}), i128{-7});
  EXPECT_EQ(to_string(i128{-12345}), "-12345");
  EXPECT_EQ(parse_i128("-12345"), i128{-12345});
  const i128 min = -kI128Max - 1;
  EXPECT_EQ(magnitude(min).value(), static_cast<u128>(kI128Max) + 1);
  EXPECT_EQ(code_of([] { checked_add(kI128Max, 1); }), Errc::arithmetic_overflow);
}

TEST(Amount, BigIntRoundTripProperty) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const u128 v = (u128{rng.next()} << 64) | rng.next();
    EXPECT_EQ(amount_from_big(to_big(Amount{v})).value(), v);
  }
  EXPECT_EQ(code_of([] { amount_from_big(BigInt(1) << 128); }), Errc::arithmetic_overflow);
  EXPECT_EQ(code_of([] { amount_from_big(BigInt(-1)); }), Errc::arithmetic_overflow);
}

TEST(Amount, Rounding) {
  EXPECT_EQ(round_to_amount(2.5L).value(), u128{2});
  EXPECT_EQ(round_to_amount(2.6L).value(), u128{3});
  EXPECT_EQ(floor_to_amount(2.99L).value(), u128{2});
  EXPECT_TRUE(round_to_amount(-4.0L).is_zero());
}

TEST(Random, DerivedSeedsAreStable) {
  EXPECT_EQ(derive_seed(7, 1), derive_seed(7, 1));
  EXPECT_NE(derive_seed(7, 1), derive_seed(7, 2));
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
}
