#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ammlab/amount.hpp"

namespace ammlab {

enum class Direction { x_to_y, y_to_x };

Direction opposite(Direction d) noexcept;
std::string_view to_string(Direction d) noexcept;
/// Accepts "x_to_y", "xtoy", "x2y" and "XtoY" (and the Y variants).
Direction parse_direction(std::string_view text);

struct FeeRate {
  std::uint64_t numerator = 997;
  std::uint64_t denominator = 1000;

  /// Throws invalid_argument unless 0 < numerator <= denominator.
  void validate() const;
  long double gamma() const noexcept {
    return static_cast<long double>(numerator) / static_cast<long double>(denominator);
  }
  Rational exact() const { return Rational(numerator, denominator); }
  friend bool operator==(const FeeRate&, const FeeRate&) = default;
};

struct PoolState {
  std::string market_id;
  Amount x;
  Amount y;
  FeeRate fee;

  bool active() const noexcept { return !x.is_zero() && !y.is_zero(); }
  Amount reserve_in(Direction d) const noexcept { return d == Direction::x_to_y ? x : y; }
  Amount reserve_out(Direction d) const noexcept { return d == Direction::x_to_y ? y : x; }
  friend bool operator==(const PoolState&, const PoolState&) = default;
};

PoolState make_pool(std::string market_id, u128 x, u128 y, FeeRate fee = {});

/// Same market seen with its assets swapped, so Y->X questions become X->Y ones.
PoolState mirrored(const PoolState& p);

struct SwapAction {
  std::string market_id;
  Direction direction = Direction::x_to_y;
  Amount amount_in;
  Amount min_amount_out;  // zero means no slippage guard
  friend bool operator==(const SwapAction&, const SwapAction&) = default;
};

struct SwapResult {
  PoolState pool;
  Amount amount_out;
};

/// Output of a constant-product swap with the fee taken from the input:
/// floor(in*num*r_out / (r_in*den + in*num)).
Amount quote(const PoolState& pool, Direction d, Amount amount_in);

/// Executes the swap. Throws swap_reverted when the quote is below
/// action.min_amount_out; the input pool is never modified.
SwapResult apply_swap(const PoolState& pool, const SwapAction& action);

/// reserve_out / reserve_in, exact and without fee.
Rational marginal_price(const PoolState& pool, Direction d);

/// Three-way comparison of out/in prices of two pools for direction d.
int compare_price(const PoolState& a, const PoolState& b, Direction d);

/// Applies a net reserve change (positive values flow into the pool) as one
/// swap, checking the fee-adjusted invariant on the net input side.
/// Throws swap_reverted when the change would extract value from the pool.
PoolState apply_net_delta(const PoolState& pool, i128 dx, i128 dy);

/// x*y as an exact integer.
BigInt invariant(const PoolState& pool);

}  // namespace ammlab
