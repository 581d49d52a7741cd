#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ammlab/pool.hpp"
#include "ammlab/random.hpp"

namespace ammlab {

enum class Objective { route_output, arb_profit, price_gap };

std::string_view to_string(Objective o) noexcept;
Objective parse_objective(std::string_view text);

/// Search window for the brute-force verifiers. Zero hi / coarse_step pick
/// defaults derived from the instance.
struct SearchSpec {
  Amount lo{1};
  Amount hi;
  Amount coarse_step;
  int refine_passes = 64;
  Objective objective = Objective::arb_profit;
};

struct BruteRouteResult {
  std::vector<Amount> split;  // same order as the input pools
  Amount output;
  std::uint64_t evaluations = 0;
};

/// Grid search over all splits (simplex grid for three pools) followed by a
/// shrinking pattern search down to single units. At most three pools.
BruteRouteResult brute_route(const std::vector<PoolState>& pools, Direction d, Amount total_in,
                             SearchSpec spec = {Amount{0}, Amount{0}, Amount{0}, 64, Objective::route_output});

struct BruteArbResult {
  Amount argmax;
  // Smallest and largest inputs found attaining `profit`, each extended over
  // its run of equal profit. Coarse intermediate units can make several
  // separate inputs tie.
  Amount plateau_lo;
  Amount plateau_hi;
  i128 profit = 0;
  bool unimodal = true;
  std::uint64_t evaluations = 0;
};

/// Maximizes the executed X->Y->X round-trip profit over inputs in [lo, hi]
/// by a log grid, golden-section narrowing, a unit-step window scan and a scan
/// of the smallest inputs buying each nearby whole number of Y units.
BruteArbResult brute_arb(const PoolState& pool1, const PoolState& pool2, SearchSpec spec = {});

/// Smallest integer input into `rich` whose exact post-swap price (fee kept
/// in the pool, no flooring) is at or below the price of `poor`.
Amount brute_sync_threshold(const PoolState& rich, const PoolState& poor, Direction d);

/// Swap output in exact rationals: in*num*r_out / (r_in*den + in*num).
Rational rational_swap(const PoolState& pool, const SwapAction& action);

struct RationalPool {
  Rational x;
  Rational y;
  FeeRate fee;
};

RationalPool to_rational(const PoolState& p);
/// Applies a swap with rational amounts; returns the output.
Rational rational_apply(RationalPool& pool, Direction d, const Rational& amount_in);

// Seeded instance generators shared by tests, fixtures and benchmarks.

/// Pair with reserves log-uniform in [lo, hi] for which buying Y on the first
/// pool and selling on the second makes a positive integer profit.
std::pair<PoolState, PoolState> random_profitable_pair(Rng& rng, double lo = 1e4, double hi = 1e12);

struct RouteInstance {
  std::vector<PoolState> pools;
  Amount total_in;
};

/// n pools with distinct prices (neighbouring gaps of 1% to 4x) and an input
/// between 0.1% and 200% of the best pool's input reserve.
RouteInstance random_route_instance(Rng& rng, int n, double lo = 1e4, double hi = 1e12);

}  // namespace ammlab
