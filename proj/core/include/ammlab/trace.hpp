#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ammlab/pool.hpp"
#include "ammlab/serialize.hpp"

namespace ammlab {

struct BlockRec {
  std::uint64_t height = 0;
  std::int64_t ts_ms = 0;
  std::uint64_t size_bytes = 0;
};

enum class TxStatus { success, reverted };

std::string_view to_string(TxStatus s) noexcept;

struct TxRec {
  std::string id;
  std::optional<std::uint64_t> block_height;  // empty: seen on the network, never mined
  std::uint32_t index = 0;
  std::uint64_t gas_price = 0;
  std::string sender;
  std::uint64_t nonce = 0;
  std::uint64_t size_bytes = 0;
  TxStatus status = TxStatus::success;
};

/// A swap performed (or, for reverted and unmined transactions, attempted).
struct SwapEventRec {
  std::string tx_id;
  std::string market_id;
  Direction direction = Direction::x_to_y;
  Amount amount_in;
  Amount amount_out;
  Amount min_amount_out;
};

struct SightingRec {
  std::string tx_id;
  std::int64_t first_seen_ms = 0;
};

struct Trace {
  std::vector<PoolState> markets;
  std::vector<BlockRec> blocks;
  std::vector<TxRec> txs;
  std::vector<SwapEventRec> swaps;
  std::vector<SightingRec> sightings;
  std::uint64_t malformed = 0;
  std::vector<std::string> warnings;
};

/// Reads JSON lines; each has "kind" in {market, block, tx, swap_event,
/// p2p_sighting}. Malformed lines are counted and skipped.
Trace read_trace(std::istream& in);
Trace read_trace_file(const std::string& path);
void write_trace(std::ostream& out, const Trace& trace);

/// Position in the chain: the state "at" a cursor includes every successful
/// transaction strictly before it.
struct Cursor {
  std::uint64_t height = 0;
  std::int64_t index = 0;
  friend auto operator<=>(const Cursor&, const Cursor&) = default;
};

/// Indexed view of a trace with per-market state history.
class TraceIndex {
 public:
  explicit TraceIndex(Trace trace);

  const Trace& trace() const { return trace_; }
  const TxRec* tx(const std::string& id) const;
  const std::vector<SwapEventRec>& swaps_of(const std::string& tx_id) const;
  std::optional<std::int64_t> first_seen(const std::string& tx_id) const;
  const BlockRec* block(std::uint64_t height) const;
  /// Mined transactions ordered by (height, index).
  const std::vector<const TxRec*>& mined() const { return mined_; }
  Cursor cursor_of(const TxRec& tx) const;
  std::uint64_t first_height() const { return first_height_; }

  /// Pool state of a market at a cursor; nullptr for unknown markets.
  const PoolState* pool_at(const std::string& market_id, Cursor c) const;

  /// Replays the transaction's recorded inputs at the cursor and applies the
  /// arbitrage tests to the simulated amounts. nullopt: unknown market.
  std::optional<bool> successful_arb_at(const TxRec& tx, Cursor c) const;

 private:
  Trace trace_;
  std::unordered_map<std::string, std::size_t> tx_by_id_;
  std::unordered_map<std::string, std::vector<SwapEventRec>> swaps_by_tx_;
  std::unordered_map<std::string, std::int64_t> seen_;
  std::map<std::uint64_t, BlockRec> blocks_;
  std::vector<const TxRec*> mined_;
  std::unordered_map<std::string, std::vector<std::pair<Cursor, PoolState>>> history_;
  std::uint64_t first_height_ = 0;
};

/// True when two swaps on distinct markets go X->Y and Y->X, the second leg
/// spends no more than the first obtained, and more comes back than went in.
/// Both asset labelings are tried.
bool matches_arbitrage(const std::vector<SwapEventRec>& swaps);

/// Successful mined transactions whose recorded swaps form an arbitrage.
std::vector<std::string> detect_arbitrages(const TraceIndex& index);

enum class OverheadLabel { front, back };
std::string_view to_string(OverheadLabel l) noexcept;

struct BlockspaceOverhead {
  std::string tx_id;
  OverheadLabel label = OverheadLabel::back;
  std::vector<std::string> arb_ids;  // opportunities it competed for, nearest first
  std::optional<int> distance;       // blocks after the nearest opportunity
  std::uint64_t size_bytes = 0;
};

struct NetworkOverhead {
  std::string tx_id;
  std::string arb_id;
  std::uint64_t size_bytes = 0;
  bool low_confidence = false;
};

struct Opportunity {
  std::string arb_id;
  std::uint64_t height = 0;
  std::optional<std::string> victim_id;
  std::vector<std::string> blockspace;
  std::vector<std::string> network;
  std::uint64_t network_bytes = 0;
};

struct OverheadReport {
  std::vector<std::string> arbitrages;
  std::vector<BlockspaceOverhead> blockspace;
  std::vector<NetworkOverhead> network;
  std::vector<Opportunity> opportunities;
  std::map<int, std::uint64_t> front_distance;
  std::map<int, std::uint64_t> back_distance;
  std::uint64_t unclassifiable = 0;
  std::uint64_t malformed = 0;
  std::uint64_t blockspace_bytes = 0;
  std::uint64_t network_bytes = 0;
  double network_bytes_mean = 0;  // per opportunity
  double network_bytes_std = 0;
};

constexpr int kWindowBlocks = 5;

/// Block-space overhead (C1 plus C2a front or C2b back) for every mined
/// transaction; fills blockspace, histograms and unclassifiable.
void classify_blockspace_overhead(const TraceIndex& index, OverheadReport& report);

/// Network overhead (N1, N2, N3) against each successful arbitrage; needs
/// report.arbitrages and report.blockspace filled.
void classify_network_overhead(const TraceIndex& index, OverheadReport& report);

OverheadReport analyze(const TraceIndex& index);

json to_json(const OverheadReport& r);
std::string histogram_csv(const OverheadReport& r);

/// 1 - c_a2mm / (c_amm + c_arb + c_overhead). All inputs must be positive.
double blockspace_reduction(double c_a2mm, double c_amm, double c_arb, double c_overhead);
Rational blockspace_reduction(const Rational& c_a2mm, const Rational& c_amm, const Rational& c_arb,
                              const Rational& c_overhead);

struct CorpusConfig {
  int arbitrages = 100;
  int blockspace_overheads = 300;
  int network_overheads = 500;
  int decoys = 200;
  std::uint64_t seed = 7;
};

struct AnswerKey {
  std::vector<std::string> arbitrages;
  std::vector<BlockspaceOverhead> blockspace;
  std::vector<NetworkOverhead> network;
  std::map<int, std::uint64_t> front_distance;
  std::map<int, std::uint64_t> back_distance;
};

struct Corpus {
  Trace trace;
  AnswerKey key;
};

/// Synthetic chain with planted opportunities, competing overhead and decoys.
Corpus generate_corpus(const CorpusConfig& config);

json to_json(const AnswerKey& key);
AnswerKey answer_key_from_json(const json& j);

}  // namespace ammlab
