#pragma once

#include <nlohmann/json.hpp>

#include "ammlab/arbitrage.hpp"
#include "ammlab/engine.hpp"
#include "ammlab/pool.hpp"
#include "ammlab/routing.hpp"

namespace ammlab {

using json = nlohmann::ordered_json;

// Amounts travel as decimal strings; readers also accept non-negative integers.
void to_json(json& j, const Amount& a);
void from_json(const json& j, Amount& a);

json signed_json(i128 v);
i128 signed_from_json(const json& j);

void to_json(json& j, const FeeRate& f);
void to_json(json& j, const PoolState& p);
void from_json(const json& j, PoolState& p);
void to_json(json& j, const SwapAction& a);
void from_json(const json& j, SwapAction& a);
void to_json(json& j, const RoutePlan& p);
void to_json(json& j, const ArbPlan& p);
void to_json(json& j, const OperationCounts& c);
void to_json(json& j, const NPoolResult& r);
void to_json(json& j, const NetSwap& n);
void to_json(json& j, const BatchPlan& p);
void to_json(json& j, const ExecutionReport& r);
void to_json(json& j, const ReplayEntry& e);

std::vector<PoolState> pools_from_json(const json& j);

/// Parses one swap-stream line {seq, market_hint, direction, amount_in, min_amount_out}.
StreamRecord stream_record_from_json(const json& j);

/// "x,y" or "x,y,fee_num,fee_den" in base units.
PoolState parse_pool_spec(std::string_view text, std::string market_id);

}  // namespace ammlab
