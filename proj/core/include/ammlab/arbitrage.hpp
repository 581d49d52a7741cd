#pragma once

#include <string>
#include <vector>

#include "ammlab/pool.hpp"

namespace ammlab {

enum class Asset { x, y };

std::string_view to_string(Asset a) noexcept;

struct ArbPlan {
  std::vector<SwapAction> legs;
  i128 expected_profit = 0;
  Asset profit_asset = Asset::x;
};

/// Whether buying Y on pool1 with X and selling it on pool2 gains X:
/// y2*x1*den1*den2 < num1*num2*y1*x2.
bool is_profitable(const PoolState& pool1, const PoolState& pool2);

/// Real-valued maximizer of the X-for-X round trip through pool1 then pool2.
/// Zero when the pair is not profitable.
long double optimal_input_real(const PoolState& pool1, const PoolState& pool2);

/// Integer input maximizing executed profit. Throws not_profitable when
/// is_profitable(pool1, pool2) is false.
Amount optimal_input(const PoolState& pool1, const PoolState& pool2);

/// Profit of the round trip executed with integer swaps; may be negative.
i128 round_trip_profit(const PoolState& pool1, const PoolState& pool2, Amount delta);

struct TwoPointResult {
  PoolState pool1;
  PoolState pool2;
  Amount intermediate;  // Y obtained on pool1 and sold on pool2
  i128 profit = 0;      // in X
};

TwoPointResult execute_two_point(const PoolState& pool1, const PoolState& pool2, Amount delta);

/// Best two-point plan between the pools for the given profit asset, trying
/// both orientations. Throws not_profitable when neither gains.
ArbPlan plan_two_point(const PoolState& a, const PoolState& b, Asset profit_asset);

struct VirtualPool {
  std::vector<std::string> members;
  Amount x;
  Amount y;
};

VirtualPool aggregate(const std::vector<PoolState>& members);

struct OperationCounts {
  int arbitrage_computations = 0;
  int sync_computations = 0;
  int swaps = 0;  // distinct pools touched
  friend bool operator==(const OperationCounts&, const OperationCounts&) = default;
};

struct NPoolResult {
  std::vector<PoolState> pools;  // final states, input order
  std::vector<SwapAction> legs;  // executed sequentially
  i128 profit = 0;
  Asset profit_asset = Asset::y;
  OperationCounts counts;
  int iterations = 0;
  int corrections = 0;  // extra pairwise steps needed to clear integer leftovers
};

/// Narrowing arbitrage over N pools of one pair and fee: the cheapest and
/// dearest aggregates trade until one reaches its neighbour's price, which then
/// joins that aggregate. Stops with a full arbitrage or when unprofitable.
NPoolResult n_pool_arbitrage(const std::vector<PoolState>& pools, Asset profit_asset = Asset::y);

/// True when some ordered pair of pools is profitable.
bool any_profitable_pair(const std::vector<PoolState>& pools);

/// Predicted cost, in percent of one average plain swap, of arbitrage across
/// n synchronized pools.
double count_cost(int n_pools);

/// Operation counts predicted for n pools: (n-1, 2n-5, n) above three.
OperationCounts predicted_counts(int n_pools);

}  // namespace ammlab
