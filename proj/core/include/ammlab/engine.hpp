#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ammlab/arbitrage.hpp"
#include "ammlab/pool.hpp"
#include "ammlab/routing.hpp"

namespace ammlab {

struct A2mmRequest {
  Direction direction = Direction::x_to_y;
  Amount amount_in;
  Amount min_amount_out;
  bool arbitrage_enabled = true;
};

/// Leaves of the swap decision tree. Every request lands in exactly one.
enum class Leaf {
  sandwich_guard,              // predicate flagged the swap: routing only
  routing_only,                // amount levels all prices by itself
  routing_then_arbitrage,      // routing, then best-effort arbitrage on what is left
  routing_arbitrage_disabled,  // amount too small to level, arbitrage switched off
};

std::string_view to_string(Leaf leaf) noexcept;

enum class LegSource { routing, arbitrage };

std::string_view to_string(LegSource s) noexcept;

struct PlannedLeg {
  SwapAction action;
  LegSource source = LegSource::routing;
};

/// Net reserve change of one market (positive flows into the pool).
struct NetSwap {
  std::string market_id;
  i128 dx = 0;
  i128 dy = 0;
  /// The net change as a single swap: input side, amount in, minimum out.
  SwapAction as_action() const;
  friend bool operator==(const NetSwap&, const NetSwap&) = default;
};

struct BatchPlan {
  A2mmRequest request;
  Leaf leaf = Leaf::routing_only;
  std::vector<PlannedLeg> legs;  // uncompressed, in execution order
  std::vector<NetSwap> net;      // one per touched market, sorted by market_id
  Amount expected_out;           // what the user receives
  i128 arb_profit = 0;
  Asset arb_asset = Asset::x;
  Amount leveling_volume;
  OperationCounts counts;        // swaps = net.size()
  int routing_computations = 0;
  double cost_units = 0;
  std::vector<PoolState> pre_pools;
};

struct ExecutionReport {
  Leaf leaf = Leaf::routing_only;
  Amount amount_out;
  i128 arb_profit = 0;
  Asset arb_asset = Asset::x;
  int legs_executed = 0;
  std::vector<PoolState> pre;
  std::vector<PoolState> post;
  double cost_units = 0;
  OperationCounts counts;
};

/// Weights of abstract cost units: one plain swap is 1.
struct CostWeights {
  double swap = 1.0;
  double arbitrage_computation = 0.4242;
  double sync_computation = 0.178;
  double routing_computation = 0.178;
};

double cost_units(const OperationCounts& c, int routing_computations, const CostWeights& w = {});

struct EngineOptions {
  /// Returns true when the swap should be treated as sandwich-exposed.
  std::function<bool(const A2mmRequest&, const std::vector<PoolState>&)> sandwichable;
  CostWeights weights;
};

BatchPlan plan(const A2mmRequest& request, const std::vector<PoolState>& pools,
               const EngineOptions& options = {});

/// Per-market netting of legs simulated in order from `pools`.
std::vector<NetSwap> compress(const std::vector<PlannedLeg>& legs, const std::vector<PoolState>& pools);

/// Applies the legs one by one, without compression.
std::vector<PoolState> execute_sequential(const std::vector<PlannedLeg>& legs,
                                          std::vector<PoolState> pools);

/// Applies the net swaps in market_id order. Throws swap_reverted (pools
/// untouched) when the user's minimum output is not met.
std::pair<std::vector<PoolState>, ExecutionReport> execute(const BatchPlan& plan,
                                                           const std::vector<PoolState>& pools);

enum class ReplayMode { amm, a2mm };

std::string_view to_string(ReplayMode m) noexcept;
ReplayMode parse_replay_mode(std::string_view text);

struct StreamRecord {
  std::uint64_t seq = 0;
  std::string market_hint;
  A2mmRequest request;
};

struct ReplayEntry {
  std::uint64_t seq = 0;
  bool ok = false;
  std::string error;
  Leaf leaf = Leaf::routing_only;
  Amount amount_out;
  Amount amm_out;       // what the hinted pool alone would pay at the same state
  i128 routing_gain = 0;
  i128 arb_profit = 0;
  Asset arb_asset = Asset::x;
  int legs_executed = 0;
  double cost_units = 0;
};

/// Stream input where each line is either a parsed record or a parse error.
struct StreamItem {
  std::optional<StreamRecord> record;
  std::uint64_t seq = 0;
  std::string error;
};

std::vector<ReplayEntry> replay(const std::vector<StreamItem>& stream, std::vector<PoolState> pools,
                                ReplayMode mode, const EngineOptions& options = {},
                                std::vector<PoolState>* final_pools = nullptr);

}  // namespace ammlab
