#pragma once

#include <string>
#include <vector>

#include "ammlab/pool.hpp"

namespace ammlab {

struct RouteLeg {
  std::string market_id;
  Amount amount_in;
  Amount expected_out;
  friend bool operator==(const RouteLeg&, const RouteLeg&) = default;
};

struct RoutePlan {
  Direction direction = Direction::x_to_y;
  std::vector<RouteLeg> legs;  // only legs with positive input, in routing order
  Amount total_in;
  Amount expected_total_out;
  /// Volume needed to bring every pool to one common price. Zero for one pool.
  Amount leveling_volume;
  /// Set when the split was worse than sending everything to the best pool.
  bool single_pool_fallback = false;
};

/// Real-valued input into `rich` that brings its out/in price down to the price
/// of `poor` (positive root of the synchronization quadratic).
long double sync_threshold_real(const PoolState& rich, const PoolState& poor, Direction d);

/// sync_threshold_real rounded to nearest. Returns 0 when prices are already
/// equal; throws precondition when `rich` is the worse pool or fees differ.
Amount sync_threshold(const PoolState& rich, const PoolState& poor, Direction d);

/// The widely quoted decimal approximation for fee 997/1000, X->Y only.
long double sync_threshold_approx(const PoolState& rich, const PoolState& poor);

/// True when neither pool is profitable to arbitrage against the other,
/// i.e. the lower price is at least fee^2 times the higher.
bool within_fee_band(const PoolState& a, const PoolState& b, Direction d);

/// Fraction of volume for pool1 once both pools share a price: x1/(x1+x2).
Rational split_ratio(const PoolState& pool1, const PoolState& pool2);

/// Splits total_in across pools of one pair to maximize total output.
RoutePlan route(const std::vector<PoolState>& pools, Direction d, Amount total_in);

/// Sum of route leg outputs when each leg is quoted against its own pool.
Amount evaluate_split(const std::vector<PoolState>& pools, Direction d,
                      const std::vector<Amount>& inputs);

namespace detail {

/// Input volume that moves a pool with reserves (rin, rout) down to the out/in
/// price target_out/target_in, with the fee accruing to the pool.
/// Returns 0 when the pool is already at or below the target.
long double volume_to_price(const BigInt& rin, const BigInt& rout, const BigInt& target_in,
                            const BigInt& target_out, long double gamma);

/// Largest-remainder apportionment of `total` by nonnegative real weights.
std::vector<Amount> apportion(Amount total, const std::vector<long double>& shares);

void require_same_fee(const std::vector<PoolState>& pools);

/// Smallest input whose quote is at least `out`.
Amount min_input(const PoolState& pool, Direction d, Amount out);

}  // namespace detail

}  // namespace ammlab
