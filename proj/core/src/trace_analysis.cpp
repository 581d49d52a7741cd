#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "ammlab/error.hpp"
#include "ammlab/trace.hpp"

namespace ammlab {

std::string_view to_string(OverheadLabel l) noexcept { return l == OverheadLabel::front ? "front" : "back"; }

TraceIndex::TraceIndex(Trace trace) : trace_(std::move(trace)) {
  for (std::size_t i = 0; i < trace_.txs.size(); ++i) {
    if (!tx_by_id_.emplace(trace_.txs[i].id, i).second) {
      trace_.warnings.push_back("duplicate tx id '" + trace_.txs[i].id + "' ignored");
    }
  }
  for (const auto& s : trace_.swaps) swaps_by_tx_[s.tx_id].push_back(s);
  for (const auto& s : trace_.sightings) {
    auto [it, fresh] = seen_.emplace(s.tx_id, s.first_seen_ms);
    if (!fresh) it->second = std::min(it->second, s.first_seen_ms);
  }
  for (const auto& b : trace_.blocks) blocks_[b.height] = b;

  for (std::size_t i = 0; i < trace_.txs.size(); ++i) {
    const TxRec& tx = trace_.txs[i];
    if (tx.block_height && tx_by_id_.at(tx.id) == i) mined_.push_back(&tx);
  }
  std::sort(mined_.begin(), mined_.end(), [&](const TxRec* a, const TxRec* b) {
    return cursor_of(*a) < cursor_of(*b);
  });
  first_height_ = std::numeric_limits<std::uint64_t>::max();
  if (!blocks_.empty()) first_height_ = blocks_.begin()->first;
  if (!mined_.empty()) first_height_ = std::min(first_height_, *mined_.front()->block_height);

  const Cursor genesis{0, std::numeric_limits<std::int64_t>::min()};
  for (const auto& m : trace_.markets) history_[m.market_id] = {{genesis, m}};
  for (const TxRec* tx : mined_) {
    if (tx->status != TxStatus::success) continue;
    for (const auto& s : swaps_of(tx->id)) {
      auto it = history_.find(s.market_id);
      if (it == history_.end()) {
        trace_.warnings.push_back("tx '" + tx->id + "' swaps on unknown market '" + s.market_id + "'");
        continue;
      }
      PoolState next = it->second.back().second;
      try {
        if (s.direction == Direction::x_to_y) {
          next.x += s.amount_in;
          next.y -= s.amount_out;
        } else {
          next.y += s.amount_in;
          next.x -= s.amount_out;
        }
      } catch (const Error&) {
        trace_.warnings.push_back("tx '" + tx->id + "' drains market '" + s.market_id + "'");
        continue;
      }
      it->second.emplace_back(cursor_of(*tx), std::move(next));
    }
  }
}

const TxRec* TraceIndex::tx(const std::string& id) const {
  auto it = tx_by_id_.find(id);
  return it == tx_by_id_.end() ? nullptr : &trace_.txs[it->second];
}

const std::vector<SwapEventRec>& TraceIndex::swaps_of(const std::string& tx_id) const {
  static const std::vector<SwapEventRec> empty;
  auto it = swaps_by_tx_.find(tx_id);
  return it == swaps_by_tx_.end() ? empty : it->second;
}

std::optional<std::int64_t> TraceIndex::first_seen(const std::string& tx_id) const {
  auto it = seen_.find(tx_id);
  if (it == seen_.end()) return std::nullopt;
  return it->second;
}

const BlockRec* TraceIndex::block(std::uint64_t height) const {
  auto it = blocks_.find(height);
  return it == blocks_.end() ? nullptr : &it->second;
}

Cursor TraceIndex::cursor_of(const TxRec& tx) const {
  return Cursor{tx.block_height.value_or(std::numeric_limits<std::uint64_t>::max()),
                static_cast<std::int64_t>(tx.index)};
}

const PoolState* TraceIndex::pool_at(const std::string& market_id, Cursor c) const {
  auto it = history_.find(market_id);
  if (it == history_.end()) return nullptr;
  const auto& h = it->second;
  auto pos = std::lower_bound(h.begin(), h.end(), c,
                              [](const auto& entry, const Cursor& cur) { return entry.first < cur; });
  return &std::prev(pos)->second;
}

std::optional<bool> TraceIndex::successful_arb_at(const TxRec& tx, Cursor c) const {
  const auto& swaps = swaps_of(tx.id);
  if (swaps.size() < 2) return false;
  std::map<std::string, PoolState> local;
  std::vector<SwapEventRec> simulated;
  for (const auto& s : swaps) {
    auto it = local.find(s.market_id);
    if (it == local.end()) {
      const PoolState* p = pool_at(s.market_id, c);
      if (!p) return std::nullopt;
      it = local.emplace(s.market_id, *p).first;
    }
    try {
      SwapResult r = apply_swap(it->second, {s.market_id, s.direction, s.amount_in, s.min_amount_out});
      it->second = std::move(r.pool);
      SwapEventRec sim = s;
      sim.amount_out = r.amount_out;
      simulated.push_back(std::move(sim));
    } catch (const Error&) {
      return false;
    }
  }
  return matches_arbitrage(simulated);
}

bool matches_arbitrage(const std::vector<SwapEventRec>& swaps) {
  for (std::size_t i = 0; i < swaps.size(); ++i) {
    for (std::size_t j = 0; j < swaps.size(); ++j) {
      const auto& xy = swaps[i];
      const auto& yx = swaps[j];
      if (i == j || xy.market_id == yx.market_id) continue;
      if (xy.direction != Direction::x_to_y || yx.direction != Direction::y_to_x) continue;
      // X in, Y out, Y back in, more X out.
      if (xy.amount_out >= yx.amount_in && yx.amount_out > xy.amount_in) return true;
      // Y in, X out, X back in, more Y out.
      if (yx.amount_out >= xy.amount_in && xy.amount_out > yx.amount_in) return true;
    }
  }
  return false;
}

std::vector<std::string> detect_arbitrages(const TraceIndex& index) {
  std::vector<std::string> out;
  for (const TxRec* tx : index.mined()) {
    if (tx->status == TxStatus::success && matches_arbitrage(index.swaps_of(tx->id))) out.push_back(tx->id);
  }
  return out;
}

void classify_blockspace_overhead(const TraceIndex& index, OverheadReport& report) {
  const std::set<std::string> arbs(report.arbitrages.begin(), report.arbitrages.end());
  std::vector<const TxRec*> arb_txs;
  for (const auto& id : report.arbitrages) arb_txs.push_back(index.tx(id));
  const auto& mined = index.mined();

  for (std::size_t pos = 0; pos < mined.size(); ++pos) {
    const TxRec& t = *mined[pos];
    if (index.swaps_of(t.id).size() < 2 || arbs.count(t.id)) continue;
    const std::uint64_t i = *t.block_height;
    const Cursor here = index.cursor_of(t);
    if (i < index.first_height() + kWindowBlocks) {
      ++report.unclassifiable;
      continue;
    }
    const auto in_place = index.successful_arb_at(t, here);
    if (!in_place) {
      ++report.unclassifiable;
      continue;
    }
    if (*in_place) continue;  // C1

    std::optional<OverheadLabel> label;
    for (std::uint64_t j = i - kWindowBlocks; j <= i && !label; ++j) {
      if (index.successful_arb_at(t, Cursor{j, 0}).value_or(false)) label = OverheadLabel::front;
    }
    for (std::size_t k = pos; k-- > 0 && !label;) {
      const TxRec& l = *mined[k];
      if (*l.block_height + kWindowBlocks < i) break;
      if (t.gas_price > l.gas_price) continue;
      Cursor after{*l.block_height, static_cast<std::int64_t>(l.index) + 1};
      if (index.successful_arb_at(t, after).value_or(false)) label = OverheadLabel::back;
    }
    if (!label) continue;

    BlockspaceOverhead o;
    o.tx_id = t.id;
    o.label = *label;
    o.size_bytes = t.size_bytes;
    for (auto it = arb_txs.rbegin(); it != arb_txs.rend(); ++it) {
      const TxRec& a = **it;
      Cursor ac = index.cursor_of(a);
      if (!(ac < here) || *a.block_height + kWindowBlocks < i) continue;
      if (index.successful_arb_at(t, ac).value_or(false)) {
        if (o.arb_ids.empty()) o.distance = static_cast<int>(i - *a.block_height);
        o.arb_ids.push_back(a.id);
      }
    }
    if (o.distance) {
      auto& hist = o.label == OverheadLabel::front ? report.front_distance : report.back_distance;
      ++hist[*o.distance];
    }
    report.blockspace_bytes += o.size_bytes;
    report.blockspace.push_back(std::move(o));
  }
}

void classify_network_overhead(const TraceIndex& index, OverheadReport& report) {
  std::vector<const TxRec*> candidates;
  for (const auto& tx : index.trace().txs) {
    if (index.tx(tx.id) != &tx || !index.first_seen(tx.id)) continue;
    if (!tx.block_height || tx.status == TxStatus::reverted) candidates.push_back(&tx);
  }
  const auto& mined = index.mined();
  std::map<std::string, std::size_t> mined_pos;
  for (std::size_t k = 0; k < mined.size(); ++k) mined_pos[mined[k]->id] = k;

  std::set<std::string> flagged;
  report.opportunities.clear();
  for (const auto& arb_id : report.arbitrages) {
    const TxRec& a = *index.tx(arb_id);
    const Cursor pre = index.cursor_of(a);
    Opportunity opp;
    opp.arb_id = arb_id;
    opp.height = *a.block_height;
    const BlockRec* blk = index.block(opp.height);

    // The victim is the latest earlier transaction before which the
    // arbitrage would no longer work.
    for (std::size_t k = mined_pos.at(arb_id); k-- > 0;) {
      const TxRec& p = *mined[k];
      if (*p.block_height + kWindowBlocks < opp.height) break;
      if (!index.successful_arb_at(a, index.cursor_of(p)).value_or(false)) {
        opp.victim_id = p.id;
        break;
      }
    }
    for (const auto& o : report.blockspace) {
      if (std::find(o.arb_ids.begin(), o.arb_ids.end(), arb_id) != o.arb_ids.end()) opp.blockspace.push_back(o.tx_id);
    }

    if (blk) {
      bool low_confidence = false;
      std::optional<std::int64_t> earliest = index.first_seen(arb_id);
      if (!earliest) {
        earliest = blk->ts_ms;
        low_confidence = true;
      }
      auto consider = [&](const std::string& id) {
        if (auto t = index.first_seen(id)) earliest = std::min(*earliest, *t);
      };
      if (opp.victim_id) consider(*opp.victim_id);
      for (const auto& id : opp.blockspace) consider(id);

      for (const TxRec* c : candidates) {
        const std::int64_t seen = *index.first_seen(c->id);
        if (!(seen < blk->ts_ms)) continue;  // N3
        if (seen < *earliest) continue;      // N2
        if (!index.successful_arb_at(*c, pre).value_or(false)) continue;  // N1
        opp.network.push_back(c->id);
        opp.network_bytes += c->size_bytes;
        if (flagged.insert(c->id).second) {
          report.network.push_back({c->id, arb_id, c->size_bytes, low_confidence});
          report.network_bytes += c->size_bytes;
        }
      }
    }
    report.opportunities.push_back(std::move(opp));
  }

  if (!report.opportunities.empty()) {
    double sum = 0, sq = 0;
    for (const auto& o : report.opportunities) sum += static_cast<double>(o.network_bytes);
    report.network_bytes_mean = sum / report.opportunities.size();
    for (const auto& o : report.opportunities) {
      double d = static_cast<double>(o.network_bytes) - report.network_bytes_mean;
      sq += d * d;
    }
    report.network_bytes_std = std::sqrt(sq / report.opportunities.size());
  }
}

OverheadReport analyze(const TraceIndex& index) {
  OverheadReport r;
  r.malformed = index.trace().malformed;
  r.arbitrages = detect_arbitrages(index);
  classify_blockspace_overhead(index, r);
  classify_network_overhead(index, r);
  return r;
}

namespace {

json histogram_json(const std::map<int, std::uint64_t>& h) {
  json j = json::object();
  for (const auto& [d, n] : h) j[std::to_string(d)] = n;
  return j;
}

std::map<int, std::uint64_t> histogram_from_json(const json& j) {
  std::map<int, std::uint64_t> h;
  for (auto it = j.begin(); it != j.end(); ++it) h[std::stoi(it.key())] = it.value().get<std::uint64_t>();
  return h;
}

json blockspace_json(const BlockspaceOverhead& o) {
  json j{{"tx_id", o.tx_id}, {"label", to_string(o.label)}, {"arb_ids", o.arb_ids}};
  j["distance"] = o.distance ? json(*o.distance) : json(nullptr);
  j["size_bytes"] = o.size_bytes;
  return j;
}

}  // namespace

json to_json(const OverheadReport& r) {
  json bs = json::array(), net = json::array(), opps = json::array();
  for (const auto& o : r.blockspace) bs.push_back(blockspace_json(o));
  for (const auto& n : r.network) {
    net.push_back({{"tx_id", n.tx_id}, {"arb_id", n.arb_id}, {"size_bytes", n.size_bytes},
                   {"low_confidence", n.low_confidence}});
  }
  for (const auto& o : r.opportunities) {
    json j{{"arb_id", o.arb_id}, {"height", o.height}};
    j["victim_id"] = o.victim_id ? json(*o.victim_id) : json(nullptr);
    j["blockspace"] = o.blockspace;
    j["network"] = o.network;
    j["network_bytes"] = o.network_bytes;
    opps.push_back(std::move(j));
  }
  return json{{"summary",
               {{"arbitrages", r.arbitrages.size()},
                {"blockspace_overheads", r.blockspace.size()},
                {"network_overheads", r.network.size()},
                {"unclassifiable", r.unclassifiable},
                {"malformed_records", r.malformed},
                {"blockspace_bytes", r.blockspace_bytes},
                {"network_bytes", r.network_bytes},
                {"network_bytes_per_opportunity_mean", r.network_bytes_mean},
                {"network_bytes_per_opportunity_std", r.network_bytes_std}}},
              {"distance_histogram",
               {{"front", histogram_json(r.front_distance)}, {"back", histogram_json(r.back_distance)}}},
              {"arbitrages", r.arbitrages},
              {"blockspace", bs},
              {"network", net},
              {"opportunities", opps}};
}

std::string histogram_csv(const OverheadReport& r) {
  std::ostringstream os;
  os << "label,distance,count\n";
  for (const auto& [d, n] : r.front_distance) os << "front," << d << ',' << n << '\n';
  for (const auto& [d, n] : r.back_distance) os << "back," << d << ',' << n << '\n';
  return os.str();
}

double blockspace_reduction(double c_a2mm, double c_amm, double c_arb, double c_overhead) {
  if (!(c_a2mm > 0) || !(c_amm > 0) || !(c_arb > 0) || !(c_overhead > 0)) {
    fail(Errc::precondition, "block-space costs must be positive");
  }
  const double denom = c_amm + c_arb + c_overhead;
  if (!(denom > 0)) fail(Errc::precondition, "zero block-space cost denominator");
  return 1.0 - c_a2mm / denom;
}

Rational blockspace_reduction(const Rational& c_a2mm, const Rational& c_amm, const Rational& c_arb,
                              const Rational& c_overhead) {
  if (c_a2mm <= 0 || c_amm <= 0 || c_arb <= 0 || c_overhead <= 0) {
    fail(Errc::precondition, "block-space costs must be positive");
  }
  return Rational(1) - c_a2mm / (c_amm + c_arb + c_overhead);
}

json to_json(const AnswerKey& key) {
  json bs = json::array(), net = json::array();
  for (const auto& o : key.blockspace) bs.push_back(blockspace_json(o));
  for (const auto& n : key.network) net.push_back({{"tx_id", n.tx_id}, {"arb_id", n.arb_id}});
  return json{{"arbitrages", key.arbitrages},
              {"blockspace", bs},
              {"network", net},
              {"distance_histogram",
               {{"front", histogram_json(key.front_distance)}, {"back", histogram_json(key.back_distance)}}}};
}

AnswerKey answer_key_from_json(const json& j) {
  AnswerKey k;
  try {
    k.arbitrages = j.at("arbitrages").get<std::vector<std::string>>();
    for (const auto& o : j.at("blockspace")) {
      BlockspaceOverhead b;
      b.tx_id = o.at("tx_id").get<std::string>();
      b.label = o.at("label").get<std::string>() == "front" ? OverheadLabel::front : OverheadLabel::back;
      b.arb_ids = o.at("arb_ids").get<std::vector<std::string>>();
      if (!o.at("distance").is_null()) b.distance = o.at("distance").get<int>();
      k.blockspace.push_back(std::move(b));
    }
    for (const auto& n : j.at("network")) {
      k.network.push_back({n.at("tx_id").get<std::string>(), n.at("arb_id").get<std::string>(), 0, false});
    }
    k.front_distance = histogram_from_json(j.at("distance_histogram").at("front"));
    k.back_distance = histogram_from_json(j.at("distance_histogram").at("back"));
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("bad answer key: ") + e.what());
  }
  return k;
}

}  // namespace ammlab
