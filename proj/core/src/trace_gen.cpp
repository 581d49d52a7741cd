#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "ammlab/arbitrage.hpp"
#include "ammlab/error.hpp"
#include "ammlab/random.hpp"
#include "ammlab/trace.hpp"

namespace ammlab {

namespace {

constexpr std::int64_t kGenesisMs = 1'650'000'000'000;
constexpr std::uint64_t kFirstHeight = 14'000'000;
constexpr std::uint64_t kGwei = 1'000'000'000;

struct Pending {
  TxRec tx;
  std::vector<SwapEventRec> swaps;
  std::optional<std::int64_t> seen;
};

struct Opp {
  std::uint64_t height = 0;
  bool front = false;
  std::string a, b;  // markets: victim trades on a
  std::uint64_t victim_gas = 0;
  std::int64_t victim_seen = 0;
  std::string arb_id;
  PoolState a_pre, b_pre;  // state the arbitrage saw
  std::vector<SwapAction> legs;
};

class Builder {
 public:
  explicit Builder(const CorpusConfig& c) : cfg_(c), rng_(c.seed) {}

  Corpus run();

 private:
  std::string fresh_id();
  std::string sender(const char* prefix, int n);
  PoolState add_market(const std::string& id, Amount x, Amount y);

  Pending make_tx(std::uint64_t gas, std::uint64_t size_lo, std::uint64_t size_hi, const std::string& from);
  // Simulates legs against live state; returns false and leaves state alone
  // on revert.
  bool mine_swaps(Pending& p, const std::vector<SwapAction>& legs);
  void place(std::uint64_t h, Pending p);
  void noise(std::uint64_t h, int count);
  // Copy of the opportunity's arbitrage with the first input scaled, quoted
  // against the pre-arbitrage state and locked to those outputs.
  std::vector<SwapEventRec> duplicate(const Opp& o, const std::string& tx_id, double scale, bool want_profit);
  void plan_victim(Opp& o, std::uint64_t h);
  void plan_arbitrage(Opp& o, std::uint64_t h);
  void plan_competition(std::size_t k);
  void plan_decoy(int kind, std::size_t k);

  CorpusConfig cfg_;
  Rng rng_;
  Trace trace_;
  AnswerKey key_;
  std::map<std::string, PoolState> live_;
  std::map<std::uint64_t, std::int64_t> ts_;
  std::map<std::uint64_t, std::vector<Pending>> block_txs_;
  std::map<std::uint64_t, std::vector<Pending>> deferred_;
  std::vector<Pending> unmined_;
  std::vector<Opp> opps_;
  std::map<std::string, std::uint64_t> nonces_;
  std::set<std::string> ids_;
  std::uint64_t counter_ = 0;
  std::vector<std::string> noise_markets_;
  std::vector<int> bs_per_opp_, net_per_opp_;
  std::vector<std::vector<int>> decoys_per_opp_;
  int loss_markets_ = 0, split_markets_ = 0;
};

std::string Builder::fresh_id() {
  for (;;) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "0x%016llx%08llx",
                  static_cast<unsigned long long>(derive_seed(cfg_.seed, 1, counter_)),
                  static_cast<unsigned long long>(counter_ & 0xffffffffu));
    ++counter_;
    if (ids_.insert(buf).second) return buf;
  }
}

std::string Builder::sender(const char* prefix, int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02d", prefix, static_cast<int>(rng_.below(static_cast<std::uint64_t>(n))));
  return buf;
}

PoolState Builder::add_market(const std::string& id, Amount x, Amount y) {
  PoolState p = make_pool(id, x.value(), y.value());
  trace_.markets.push_back(p);
  live_[id] = p;
  return p;
}

Pending Builder::make_tx(std::uint64_t gas, std::uint64_t size_lo, std::uint64_t size_hi, const std::string& from) {
  Pending p;
  p.tx.id = fresh_id();
  p.tx.gas_price = gas;
  p.tx.sender = from;
  p.tx.nonce = nonces_[from]++;
  p.tx.size_bytes = rng_.between(size_lo, size_hi);
  return p;
}

bool Builder::mine_swaps(Pending& p, const std::vector<SwapAction>& legs) {
  std::map<std::string, PoolState> scratch;
  std::vector<SwapEventRec> events;
  for (const auto& leg : legs) {
    auto it = scratch.find(leg.market_id);
    if (it == scratch.end()) it = scratch.emplace(leg.market_id, live_.at(leg.market_id)).first;
    try {
      SwapResult r = apply_swap(it->second, leg);
      it->second = r.pool;
      events.push_back({p.tx.id, leg.market_id, leg.direction, leg.amount_in, r.amount_out, leg.min_amount_out});
    } catch (const Error&) {
      return false;
    }
  }
  for (auto& [id, pool] : scratch) live_[id] = pool;
  p.swaps = std::move(events);
  p.tx.status = TxStatus::success;
  return true;
}

void Builder::place(std::uint64_t h, Pending p) {
  auto& list = block_txs_[h];
  p.tx.block_height = h;
  p.tx.index = static_cast<std::uint32_t>(list.size());
  list.push_back(std::move(p));
}

void Builder::noise(std::uint64_t h, int count) {
  for (int i = 0; i < count; ++i) {
    const std::string& m = noise_markets_[rng_.below(noise_markets_.size())];
    const PoolState& pool = live_.at(m);
    Direction d = rng_.chance(0.5) ? Direction::x_to_y : Direction::y_to_x;
    Amount in = round_to_amount(to_long_double(pool.reserve_in(d)) * rng_.uniform(0.0005, 0.004));
    if (in.is_zero()) in = Amount{1};
    Amount expect = quote(pool, d, in);
    Amount min = round_to_amount(to_long_double(expect) * 0.99);
    Pending p = make_tx(rng_.between(20, 400) * kGwei, 180, 260, sender("user", 60));
    p.seen = ts_.at(h) - static_cast<std::int64_t>(rng_.between(800, 9000));
    if (mine_swaps(p, {{m, d, in, min}})) place(h, std::move(p));
  }
}

std::vector<SwapEventRec> Builder::duplicate(const Opp& o, const std::string& tx_id, double scale, bool want_profit) {
  std::map<std::string, PoolState> pre{{o.a, o.a_pre}, {o.b, o.b_pre}};
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto scratch = pre;
    std::vector<SwapEventRec> out;
    Amount in = round_to_amount(to_long_double(o.legs.front().amount_in) * scale);
    if (in.is_zero()) in = Amount{1};
    const Amount first_in = in;
    for (const auto& leg : o.legs) {
      PoolState& pool = scratch.at(leg.market_id);
      Amount got = quote(pool, leg.direction, in);
      pool = apply_swap(pool, {leg.market_id, leg.direction, in, got}).pool;
      out.push_back({tx_id, leg.market_id, leg.direction, in, got, got});
      in = got;
    }
    const bool profit = in > first_in;
    if (profit == want_profit) return out;
    scale = want_profit ? scale * 0.9 : scale * 1.5;
  }
  fail(Errc::internal, "could not shape duplicate arbitrage");
}

void Builder::plan_victim(Opp& o, std::uint64_t h) {
  const PoolState& pool = live_.at(o.a);
  Amount in = round_to_amount(to_long_double(pool.x) * rng_.uniform(0.03, 0.15));
  Amount expect = quote(pool, Direction::x_to_y, in);
  o.victim_gas = rng_.between(100, 300) * kGwei;
  Pending v = make_tx(o.victim_gas, 200, 280, sender("user", 60));
  o.victim_seen = ts_.at(h) - static_cast<std::int64_t>(rng_.between(3000, 8000));
  v.seen = o.victim_seen;
  Amount min = round_to_amount(to_long_double(expect) * 0.995);
  if (!mine_swaps(v, {{o.a, Direction::x_to_y, in, min}})) fail(Errc::internal, "victim swap reverted");
  place(h, std::move(v));
}

void Builder::plan_arbitrage(Opp& o, std::uint64_t h) {
  o.a_pre = live_.at(o.a);
  o.b_pre = live_.at(o.b);
  ArbPlan plan = plan_two_point(o.a_pre, o.b_pre, Asset::x);
  // Lock every leg to its quoted output.
  std::map<std::string, PoolState> scratch{{o.a, o.a_pre}, {o.b, o.b_pre}};
  o.legs.clear();
  for (auto leg : plan.legs) {
    PoolState& pool = scratch.at(leg.market_id);
    leg.min_amount_out = quote(pool, leg.direction, leg.amount_in);
    pool = apply_swap(pool, leg).pool;
    o.legs.push_back(leg);
  }
  const std::uint64_t gas = o.front ? rng_.between(150, 600) * kGwei
                                    : rng_.between(o.victim_gas / kGwei / 2, o.victim_gas / kGwei) * kGwei;
  Pending a = make_tx(gas, 380, 620, sender("bot", 12));
  a.seen = o.victim_seen + static_cast<std::int64_t>(rng_.between(1, 800));
  if (!mine_swaps(a, o.legs)) fail(Errc::internal, "planted arbitrage reverted");
  o.arb_id = a.tx.id;
  key_.arbitrages.push_back(o.arb_id);
  place(h, std::move(a));
}

void Builder::plan_competition(std::size_t k) {
  const Opp& o = opps_[k];
  for (int i = 0; i < bs_per_opp_[k]; ++i) {
    const int d = static_cast<int>(rng_.below(kWindowBlocks + 1));
    const std::uint64_t gas = o.front ? rng_.between(50, 600) * kGwei
                                      : rng_.between(o.victim_gas / kGwei / 3, o.victim_gas / kGwei) * kGwei;
    Pending t = make_tx(gas, 380, 620, sender("bot", 12));
    t.tx.status = TxStatus::reverted;
    t.swaps = duplicate(o, t.tx.id, rng_.uniform(0.6, 1.0), true);
    BlockspaceOverhead e;
    e.tx_id = t.tx.id;
    e.label = o.front ? OverheadLabel::front : OverheadLabel::back;
    e.arb_ids = {o.arb_id};
    e.distance = d;
    ++(o.front ? key_.front_distance : key_.back_distance)[d];
    key_.blockspace.push_back(std::move(e));
    deferred_[o.height + static_cast<std::uint64_t>(d)].push_back(std::move(t));
  }
  for (int kind : decoys_per_opp_[k]) plan_decoy(kind, k);
  const std::int64_t close = ts_.at(o.height);
  for (int i = 0; i < net_per_opp_[k]; ++i) {
    Pending n = make_tx(rng_.between(50, 600) * kGwei, 380, 620, sender("bot", 12));
    n.swaps = duplicate(o, n.tx.id, rng_.uniform(0.6, 1.0), true);
    n.seen = o.victim_seen + static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(close - o.victim_seen)));
    key_.network.push_back({n.tx.id, o.arb_id, n.tx.size_bytes, false});
    unmined_.push_back(std::move(n));
  }
}

void Builder::plan_decoy(int kind, std::size_t k) {
  const Opp& o = opps_[k];
  const std::int64_t close = ts_.at(o.height);
  {
    switch (kind) {
      case 0:  // sighted after the block closed
      case 1: {  // sighted before anything it could react to
        Pending n = make_tx(rng_.between(50, 600) * kGwei, 380, 620, sender("bot", 12));
        n.swaps = duplicate(o, n.tx.id, rng_.uniform(0.6, 1.0), true);
        n.seen = kind == 0 ? close + static_cast<std::int64_t>(rng_.below(5000))
                           : o.victim_seen - 1 - static_cast<std::int64_t>(rng_.below(3000));
        unmined_.push_back(std::move(n));
        break;
      }
      case 2: {  // single swap, never mined
        Pending n = make_tx(rng_.between(20, 400) * kGwei, 180, 260, sender("user", 60));
        n.swaps = duplicate(o, n.tx.id, rng_.uniform(0.2, 1.0), true);
        n.swaps.resize(1);
        n.seen = o.victim_seen + static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(close - o.victim_seen)));
        unmined_.push_back(std::move(n));
        break;
      }
      case 3: {  // overshoots into a loss
        Pending n = make_tx(rng_.between(50, 600) * kGwei, 380, 620, sender("bot", 12));
        n.swaps = duplicate(o, n.tx.id, 3.0, false);
        n.seen = o.victim_seen + static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(close - o.victim_seen)));
        unmined_.push_back(std::move(n));
        break;
      }
      case 4: {  // mined round trip at a loss
        const std::string la = "loss" + std::to_string(loss_markets_) + "a";
        const std::string lb = "loss" + std::to_string(loss_markets_++) + "b";
        Amount x = rng_.log_uniform_amount(1e12, 1e15);
        Amount y = round_to_amount(to_long_double(x) * rng_.log_uniform(0.01, 100.0));
        add_market(la, x, y);
        add_market(lb, x, y);
        Pending p = make_tx(rng_.between(20, 400) * kGwei, 380, 620, sender("bot", 12));
        Amount in = round_to_amount(to_long_double(x) * rng_.uniform(0.0005, 0.001));
        Amount mid = quote(live_.at(la), Direction::x_to_y, in);
        if (!mine_swaps(p, {{la, Direction::x_to_y, in, mid}, {lb, Direction::y_to_x, mid, Amount{}}})) {
          fail(Errc::internal, "loss round trip reverted");
        }
        deferred_[o.height + 1 + rng_.below(kWindowBlocks)].push_back(std::move(p));
        break;
      }
      case 5: {  // both legs of an arbitrage, but in separate transactions
        const std::string sa = "split" + std::to_string(split_markets_) + "a";
        const std::string sb = "split" + std::to_string(split_markets_++) + "b";
        Amount x = rng_.log_uniform_amount(1e12, 1e15);
        const long double price = rng_.log_uniform(0.01, 100.0);
        PoolState pa = add_market(sa, x, round_to_amount(to_long_double(x) * price));
        PoolState pb = add_market(sb, x, round_to_amount(to_long_double(x) * price * 1.03L));
        ArbPlan plan = plan_two_point(pa, pb, Asset::x);
        const std::string who = sender("bot", 12);
        const std::uint64_t h = o.height + 1 + rng_.below(kWindowBlocks);
        for (const auto& leg : plan.legs) {
          Pending p = make_tx(rng_.between(20, 400) * kGwei, 200, 280, who);
          SwapAction a = leg;
          a.min_amount_out = Amount{};
          if (!mine_swaps(p, {a})) fail(Errc::internal, "split leg reverted");
          deferred_[h].push_back(std::move(p));
        }
        break;
      }
      case 6: {  // backrun that outbid the victim, so it could not sit behind it
        Pending t = make_tx(o.victim_gas + rng_.between(1, 50) * kGwei, 380, 620, sender("bot", 12));
        t.tx.status = TxStatus::reverted;
        t.swaps = duplicate(o, t.tx.id, rng_.uniform(0.6, 1.0), true);
        deferred_[o.height + rng_.below(kWindowBlocks + 1)].push_back(std::move(t));
        break;
      }
    }
  }
}

Corpus Builder::run() {
  if (cfg_.arbitrages < 1) fail(Errc::invalid_argument, "corpus needs at least one arbitrage");
  if (cfg_.blockspace_overheads < 0 || cfg_.network_overheads < 0 || cfg_.decoys < 0) {
    fail(Errc::invalid_argument, "corpus counts must be non-negative");
  }
  const auto n = static_cast<std::size_t>(cfg_.arbitrages);
  const std::uint64_t first_opp = kFirstHeight + kWindowBlocks + 1;
  const std::uint64_t last = first_opp + n + kWindowBlocks + 1;

  std::int64_t t = kGenesisMs;
  for (std::uint64_t h = kFirstHeight; h <= last; ++h) {
    ts_[h] = t;
    t += static_cast<std::int64_t>(rng_.between(10000, 16000));
  }
  for (int i = 0; i < 8; ++i) {
    Amount x = rng_.log_uniform_amount(1e12, 1e15);
    noise_markets_.push_back("noise" + std::to_string(i));
    add_market(noise_markets_.back(), x, round_to_amount(to_long_double(x) * rng_.log_uniform(0.01, 100.0)));
  }
  for (std::size_t k = 0; k < n; ++k) {
    Opp o;
    o.height = first_opp + k;
    o.front = rng_.chance(0.5);
    o.a = "pair" + std::to_string(k) + "a";
    o.b = "pair" + std::to_string(k) + "b";
    Amount x = rng_.log_uniform_amount(1e12, 1e15);
    const long double price = rng_.log_uniform(0.01, 100.0);
    const long double depth = rng_.log_uniform(0.5, 2.0);
    add_market(o.a, x, round_to_amount(to_long_double(x) * price));
    Amount xb = round_to_amount(to_long_double(x) * depth);
    add_market(o.b, xb, round_to_amount(to_long_double(xb) * price));
    opps_.push_back(std::move(o));
  }
  bs_per_opp_.assign(n, 0);
  net_per_opp_.assign(n, 0);
  decoys_per_opp_.assign(n, {});
  for (int i = 0; i < cfg_.blockspace_overheads; ++i) ++bs_per_opp_[rng_.below(n)];
  for (int i = 0; i < cfg_.network_overheads; ++i) ++net_per_opp_[rng_.below(n)];
  for (int i = 0; i < cfg_.decoys; ++i) {
    const std::size_t k = rng_.below(n);
    int kind = i % 7;
    if (kind == 6 && opps_[k].front) kind = 0;
    decoys_per_opp_[k].push_back(kind);
  }

  auto opp_at = [&](std::uint64_t h) -> Opp* {
    if (h < first_opp || h >= first_opp + n) return nullptr;
    return &opps_[h - first_opp];
  };
  for (std::uint64_t h = kFirstHeight; h <= last; ++h) {
    Opp* o = opp_at(h);
    if (o && o->front) {
      plan_arbitrage(*o, h);
      plan_competition(h - first_opp);
    }
    noise(h, static_cast<int>(rng_.between(1, 3)));
    if (o && !o->front) {
      plan_victim(*o, h);
      plan_arbitrage(*o, h);
      plan_competition(h - first_opp);
    }
    noise(h, static_cast<int>(rng_.between(0, 2)));
    for (auto& p : deferred_[h]) place(h, std::move(p));
    if (Opp* next = opp_at(h + 1); next && next->front) plan_victim(*next, h);

    BlockRec b{h, ts_.at(h), 540};
    for (const auto& p : block_txs_[h]) b.size_bytes += p.tx.size_bytes;
    trace_.blocks.push_back(b);
  }

  auto emit = [&](Pending& p) {
    for (auto& s : p.swaps) trace_.swaps.push_back(std::move(s));
    if (p.seen) trace_.sightings.push_back({p.tx.id, *p.seen});
    trace_.txs.push_back(std::move(p.tx));
  };
  for (auto& [h, list] : block_txs_) {
    for (auto& p : list) emit(p);
  }
  for (auto& p : unmined_) emit(p);
  return Corpus{std::move(trace_), std::move(key_)};
}

}  // namespace

Corpus generate_corpus(const CorpusConfig& config) { return Builder(config).run(); }

}  // namespace ammlab
