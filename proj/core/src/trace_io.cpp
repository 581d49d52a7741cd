#include <fstream>
#include <istream>
#include <ostream>

#include "ammlab/error.hpp"
#include "ammlab/trace.hpp"

namespace ammlab {

std::string_view to_string(TxStatus s) noexcept {
  return s == TxStatus::success ? "success" : "reverted";
}

namespace {

TxStatus parse_status(const std::string& s) {
  if (s == "success") return TxStatus::success;
  if (s == "reverted" || s == "failed") return TxStatus::reverted;
  fail(Errc::parse_error, "unknown tx status '" + s + "'");
}

void read_line(const json& j, Trace& t) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "market") {
    t.markets.push_back(j.get<PoolState>());
    if (!t.markets.back().active()) fail(Errc::parse_error, "market with zero reserve");
  } else if (kind == "block") {
    t.blocks.push_back({j.at("height").get<std::uint64_t>(), j.at("ts_ms").get<std::int64_t>(),
                        j.value("size_bytes", std::uint64_t{0})});
  } else if (kind == "tx") {
    TxRec tx;
    tx.id = j.at("id").get<std::string>();
    if (j.contains("block_height") && !j.at("block_height").is_null()) {
      tx.block_height = j.at("block_height").get<std::uint64_t>();
    }
    tx.index = j.value("index", std::uint32_t{0});
    tx.gas_price = j.value("gas_price", std::uint64_t{0});
    tx.sender = j.value("sender", std::string{});
    tx.nonce = j.value("nonce", std::uint64_t{0});
    tx.size_bytes = j.value("size_bytes", std::uint64_t{0});
    tx.status = parse_status(j.value("status", std::string{"success"}));
    t.txs.push_back(std::move(tx));
  } else if (kind == "swap_event") {
    SwapEventRec s;
    s.tx_id = j.at("tx_id").get<std::string>();
    s.market_id = j.at("market_id").get<std::string>();
    s.direction = parse_direction(j.at("direction").get<std::string>());
    s.amount_in = j.at("amount_in").get<Amount>();
    s.amount_out = j.at("amount_out").get<Amount>();
    if (j.contains("min_amount_out")) s.min_amount_out = j.at("min_amount_out").get<Amount>();
    if (s.amount_in.is_zero() || s.amount_out.is_zero()) fail(Errc::parse_error, "swap amounts must be positive");
    t.swaps.push_back(std::move(s));
  } else if (kind == "p2p_sighting") {
    t.sightings.push_back({j.at("tx_id").get<std::string>(), j.at("first_seen_ms").get<std::int64_t>()});
  } else {
    fail(Errc::parse_error, "unknown record kind '" + kind + "'");
  }
}

}  // namespace

Trace read_trace(std::istream& in) {
  Trace t;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      read_line(json::parse(line), t);
    } catch (const std::exception& e) {
      ++t.malformed;
      t.warnings.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return t;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open trace '" + path + "'");
  return read_trace(in);
}

void write_trace(std::ostream& out, const Trace& t) {
  std::unordered_map<std::string, std::vector<const SwapEventRec*>> swaps;
  for (const auto& s : t.swaps) swaps[s.tx_id].push_back(&s);
  std::map<std::uint64_t, std::vector<const TxRec*>> by_block;
  std::vector<const TxRec*> unmined;
  for (const auto& tx : t.txs) {
    if (tx.block_height) by_block[*tx.block_height].push_back(&tx); else unmined.push_back(&tx);
  }
  for (auto& [h, v] : by_block) {
    std::stable_sort(v.begin(), v.end(), [](const TxRec* a, const TxRec* b) { return a->index < b->index; });
  }

  auto emit_tx = [&](const TxRec& tx) {
    json j{{"kind", "tx"}, {"id", tx.id}};
    j["block_height"] = tx.block_height ? json(*tx.block_height) : json(nullptr);
    j["index"] = tx.index;
    j["gas_price"] = tx.gas_price;
    j["sender"] = tx.sender;
    j["nonce"] = tx.nonce;
    j["size_bytes"] = tx.size_bytes;
    j["status"] = to_string(tx.status);
    out << j.dump() << '\n';
    for (const SwapEventRec* s : swaps[tx.id]) {
      json e{{"kind", "swap_event"}, {"tx_id", s->tx_id}, {"market_id", s->market_id},
             {"direction", to_string(s->direction)}, {"amount_in", s->amount_in},
             {"amount_out", s->amount_out}};
      if (!s->min_amount_out.is_zero()) e["min_amount_out"] = s->min_amount_out;
      out << e.dump() << '\n';
    }
  };

  for (const auto& m : t.markets) {
    json j = m;
    j["kind"] = "market";
    out << j.dump() << '\n';
  }
  for (const auto& b : t.blocks) {
    out << json{{"kind", "block"}, {"height", b.height}, {"ts_ms", b.ts_ms}, {"size_bytes", b.size_bytes}}.dump()
        << '\n';
    for (const TxRec* tx : by_block[b.height]) emit_tx(*tx);
    by_block.erase(b.height);
  }
  for (auto& [h, v] : by_block) {
    for (const TxRec* tx : v) emit_tx(*tx);
  }
  for (const TxRec* tx : unmined) emit_tx(*tx);
  for (const auto& s : t.sightings) {
    out << json{{"kind", "p2p_sighting"}, {"tx_id", s.tx_id}, {"first_seen_ms", s.first_seen_ms}}.dump() << '\n';
  }
}

}  // namespace ammlab
