#include "ammlab/serialize.hpp"

#include <cstdlib>

#include "ammlab/error.hpp"

namespace ammlab {

void to_json(json& j, const Amount& a) { j = a.str(); }

void from_json(const json& j, Amount& a) {
  if (j.is_string()) {
    a = Amount::parse(j.get<std::string>());
  } else if (j.is_number_unsigned()) {
    a = Amount{j.get<std::uint64_t>()};
  } else if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    a = Amount{static_cast<u128>(j.get<std::int64_t>())};
  } else {
    fail(Errc::parse_error, "amount must be a decimal string or non-negative integer");
  }
}

json signed_json(i128 v) { return to_string(v); }

i128 signed_from_json(const json& j) {
  if (j.is_string()) return parse_i128(j.get<std::string>());
  if (j.is_number_integer()) return j.get<std::int64_t>();
  fail(Errc::parse_error, "signed amount must be a decimal string or integer");
}

void to_json(json& j, const FeeRate& f) {
  j = json{{"fee_num", f.numerator}, {"fee_den", f.denominator}};
}

void to_json(json& j, const PoolState& p) {
  j = json{{"market_id", p.market_id}, {"x", p.x}, {"y", p.y},
           {"fee_num", p.fee.numerator}, {"fee_den", p.fee.denominator}};
}

void from_json(const json& j, PoolState& p) {
  try {
    p.market_id = j.at("market_id").get<std::string>();
    p.x = j.at("x").get<Amount>();
    p.y = j.at("y").get<Amount>();
    p.fee = FeeRate{};
    if (j.contains("fee_num")) p.fee.numerator = j.at("fee_num").get<std::uint64_t>();
    if (j.contains("fee_den")) p.fee.denominator = j.at("fee_den").get<std::uint64_t>();
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("bad pool record: ") + e.what());
  }
  p.fee.validate();
}

void to_json(json& j, const SwapAction& a) {
  j = json{{"market_id", a.market_id}, {"direction", to_string(a.direction)},
           {"amount_in", a.amount_in}, {"min_amount_out", a.min_amount_out}};
}

void from_json(const json& j, SwapAction& a) {
  try {
    a.market_id = j.at("market_id").get<std::string>();
    a.direction = parse_direction(j.at("direction").get<std::string>());
    a.amount_in = j.at("amount_in").get<Amount>();
    a.min_amount_out = j.contains("min_amount_out") ? j.at("min_amount_out").get<Amount>() : Amount{};
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("bad swap record: ") + e.what());
  }
}

void to_json(json& j, const RoutePlan& p) {
  json legs = json::array();
  for (const auto& l : p.legs) {
    legs.push_back({{"market_id", l.market_id}, {"amount_in", l.amount_in}, {"expected_out", l.expected_out}});
  }
  j = json{{"direction", to_string(p.direction)}, {"total_in", p.total_in},
           {"expected_total_out", p.expected_total_out}, {"leveling_volume", p.leveling_volume},
           {"single_pool_fallback", p.single_pool_fallback}, {"legs", legs}};
}

void to_json(json& j, const ArbPlan& p) {
  j = json{{"profit_asset", to_string(p.profit_asset)}, {"expected_profit", signed_json(p.expected_profit)},
           {"legs", p.legs}};
}

void to_json(json& j, const OperationCounts& c) {
  j = json{{"arbitrage_computations", c.arbitrage_computations},
           {"sync_computations", c.sync_computations}, {"swaps", c.swaps}};
}

void to_json(json& j, const NPoolResult& r) {
  j = json{{"profit_asset", to_string(r.profit_asset)}, {"profit", signed_json(r.profit)},
           {"counts", r.counts}, {"iterations", r.iterations}, {"corrections", r.corrections},
           {"legs", r.legs}, {"pools", r.pools}};
}

void to_json(json& j, const NetSwap& n) {
  j = json{{"market_id", n.market_id}, {"dx", signed_json(n.dx)}, {"dy", signed_json(n.dy)},
           {"action", n.as_action()}};
}

void to_json(json& j, const BatchPlan& p) {
  json legs = json::array();
  for (const auto& l : p.legs) {
    json leg = l.action;
    leg["source"] = to_string(l.source);
    legs.push_back(std::move(leg));
  }
  j = json{{"leaf", to_string(p.leaf)},
           {"direction", to_string(p.request.direction)},
           {"amount_in", p.request.amount_in},
           {"min_amount_out", p.request.min_amount_out},
           {"arbitrage_enabled", p.request.arbitrage_enabled},
           {"leveling_volume", p.leveling_volume},
           {"expected_out", p.expected_out},
           {"arb_profit", signed_json(p.arb_profit)},
           {"arb_asset", to_string(p.arb_asset)},
           {"counts", p.counts},
           {"routing_computations", p.routing_computations},
           {"cost_units", p.cost_units},
           {"legs", legs},
           {"net", p.net}};
}

void to_json(json& j, const ExecutionReport& r) {
  j = json{{"leaf", to_string(r.leaf)}, {"amount_out", r.amount_out},
           {"arb_profit", signed_json(r.arb_profit)}, {"arb_asset", to_string(r.arb_asset)},
           {"legs_executed", r.legs_executed}, {"cost_units", r.cost_units}, {"counts", r.counts},
           {"pre", r.pre}, {"post", r.post}};
}

void to_json(json& j, const ReplayEntry& e) {
  if (!e.ok) {
    j = json{{"seq", e.seq}, {"ok", false}, {"error", e.error}};
    return;
  }
  j = json{{"seq", e.seq}, {"ok", true}, {"leaf", to_string(e.leaf)}, {"amount_out", e.amount_out},
           {"amm_out", e.amm_out}, {"routing_gain", signed_json(e.routing_gain)},
           {"arb_profit", signed_json(e.arb_profit)}, {"arb_asset", to_string(e.arb_asset)},
           {"legs_executed", e.legs_executed}, {"cost_units", e.cost_units}};
}

std::vector<PoolState> pools_from_json(const json& j) {
  const json& arr = j.is_object() && j.contains("pools") ? j.at("pools") : j;
  if (!arr.is_array()) fail(Errc::parse_error, "expected an array of pools");
  std::vector<PoolState> out;
  for (const auto& p : arr) out.push_back(p.get<PoolState>());
  return out;
}

StreamRecord stream_record_from_json(const json& j) {
  StreamRecord r;
  try {
    r.seq = j.at("seq").get<std::uint64_t>();
    r.market_hint = j.value("market_hint", std::string{});
    r.request.direction = parse_direction(j.at("direction").get<std::string>());
    r.request.amount_in = j.at("amount_in").get<Amount>();
    r.request.min_amount_out = j.contains("min_amount_out") ? j.at("min_amount_out").get<Amount>() : Amount{};
    if (j.contains("arbitrage_enabled")) r.request.arbitrage_enabled = j.at("arbitrage_enabled").get<bool>();
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("bad stream record: ") + e.what());
  }
  if (r.request.amount_in.is_zero()) fail(Errc::parse_error, "stream record has zero amount_in");
  return r;
}

PoolState parse_pool_spec(std::string_view text, std::string market_id) {
  std::vector<std::string_view> parts;
  while (true) {
    auto pos = text.find(',');
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  if (parts.size() != 2 && parts.size() != 4) {
    fail(Errc::invalid_argument, "pool must be 'x,y' or 'x,y,fee_num,fee_den'");
  }
  PoolState p{std::move(market_id), Amount::parse(parts[0]), Amount::parse(parts[1]), {}};
  if (parts.size() == 4) {
    p.fee.numerator = static_cast<std::uint64_t>(Amount::parse(parts[2]).value());
    p.fee.denominator = static_cast<std::uint64_t>(Amount::parse(parts[3]).value());
  }
  p.fee.validate();
  return p;
}

}  // namespace ammlab
