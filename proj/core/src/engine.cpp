#include "ammlab/engine.hpp"

#include <algorithm>
#include <map>

#include "ammlab/error.hpp"

namespace ammlab {

std::string_view to_string(Leaf leaf) noexcept {
  switch (leaf) {
    case Leaf::sandwich_guard: return "sandwich_guard";
    case Leaf::routing_only: return "routing_only";
    case Leaf::routing_then_arbitrage: return "routing_then_arbitrage";
    case Leaf::routing_arbitrage_disabled: return "routing_arbitrage_disabled";
  }
  return "unknown";
}

std::string_view to_string(LegSource s) noexcept {
  return s == LegSource::routing ? "routing" : "arbitrage";
}

std::string_view to_string(ReplayMode m) noexcept { return m == ReplayMode::amm ? "amm" : "a2mm"; }

ReplayMode parse_replay_mode(std::string_view text) {
  if (text == "amm" || text == "AMM") return ReplayMode::amm;
  if (text == "a2mm" || text == "A2MM") return ReplayMode::a2mm;
  fail(Errc::parse_error, "unknown replay mode '" + std::string(text) + "'");
}

SwapAction NetSwap::as_action() const {
  SwapAction a;
  a.market_id = market_id;
  if (dx > 0) {
    a.direction = Direction::x_to_y;
    a.amount_in = magnitude(dx);
    a.min_amount_out = dy < 0 ? magnitude(dy) : Amount{};
  } else {
    a.direction = Direction::y_to_x;
    a.amount_in = magnitude(dy);
    a.min_amount_out = dx < 0 ? magnitude(dx) : Amount{};
  }
  return a;
}

double cost_units(const OperationCounts& c, int routing_computations, const CostWeights& w) {
  return c.swaps * w.swap + c.arbitrage_computations * w.arbitrage_computation +
         c.sync_computations * w.sync_computation + routing_computations * w.routing_computation;
}

namespace {

std::size_t index_of(const std::vector<PoolState>& pools, const std::string& id) {
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (pools[i].market_id == id) return i;
  }
  fail(Errc::invalid_argument, "unknown market '" + id + "'");
}

}  // namespace

std::vector<PoolState> execute_sequential(const std::vector<PlannedLeg>& legs,
                                          std::vector<PoolState> pools) {
  for (const auto& leg : legs) {
    std::size_t i = index_of(pools, leg.action.market_id);
    pools[i] = apply_swap(pools[i], leg.action).pool;
  }
  return pools;
}

std::vector<NetSwap> compress(const std::vector<PlannedLeg>& legs, const std::vector<PoolState>& pools) {
  std::vector<PoolState> after = execute_sequential(legs, pools);
  std::vector<NetSwap> net;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    NetSwap n{pools[i].market_id, signed_diff(after[i].x, pools[i].x), signed_diff(after[i].y, pools[i].y)};
    if (n.dx != 0 || n.dy != 0) net.push_back(std::move(n));
  }
  std::sort(net.begin(), net.end(),
            [](const NetSwap& a, const NetSwap& b) { return a.market_id < b.market_id; });
  return net;
}

BatchPlan plan(const A2mmRequest& request, const std::vector<PoolState>& pools,
               const EngineOptions& options) {
  if (pools.empty()) fail(Errc::precondition, "plan needs at least one pool");
  if (request.amount_in.is_zero()) fail(Errc::precondition, "swap input must be positive");
  detail::require_same_fee(pools);

  BatchPlan bp;
  bp.request = request;
  bp.pre_pools = pools;
  const RoutePlan rp = route(pools, request.direction, request.amount_in);
  bp.leveling_volume = rp.leveling_volume;
  bp.routing_computations = pools.size() > 1 ? 1 : 0;

  if (options.sandwichable && options.sandwichable(request, pools)) {
    bp.leaf = Leaf::sandwich_guard;
  } else if (request.amount_in >= rp.leveling_volume) {
    bp.leaf = Leaf::routing_only;
  } else if (request.arbitrage_enabled) {
    bp.leaf = Leaf::routing_then_arbitrage;
  } else {
    bp.leaf = Leaf::routing_arbitrage_disabled;
  }

  for (const auto& leg : rp.legs) {
    bp.legs.push_back({{leg.market_id, request.direction, leg.amount_in, {}}, LegSource::routing});
    bp.expected_out += leg.expected_out;
  }

  if (bp.leaf == Leaf::routing_then_arbitrage && pools.size() > 1) {
    const std::vector<PoolState> routed = execute_sequential(bp.legs, pools);
    std::optional<NPoolResult> best;
    for (Asset a : {Asset::x, Asset::y}) {
      NPoolResult r = n_pool_arbitrage(routed, a);
      if (r.profit > 0 && (!best || r.profit > best->profit)) best = std::move(r);
    }
    if (best) {
      for (const auto& leg : best->legs) bp.legs.push_back({leg, LegSource::arbitrage});
      bp.arb_profit = best->profit;
      bp.arb_asset = best->profit_asset;
      bp.counts.arbitrage_computations = best->counts.arbitrage_computations;
      bp.counts.sync_computations = best->counts.sync_computations;
    }
  }

  bp.net = compress(bp.legs, pools);
  bp.counts.swaps = static_cast<int>(bp.net.size());
  bp.cost_units = cost_units(bp.counts, bp.routing_computations, options.weights);
  return bp;
}

std::pair<std::vector<PoolState>, ExecutionReport> execute(const BatchPlan& plan,
                                                           const std::vector<PoolState>& pools) {
  if (!plan.pre_pools.empty() && plan.pre_pools != pools) {
    fail(Errc::precondition, "plan was built against different pool states");
  }
  if (plan.expected_out < plan.request.min_amount_out) {
    fail(Errc::swap_reverted, "output " + plan.expected_out.str() + " below minimum " +
                                  plan.request.min_amount_out.str());
  }
  std::vector<PoolState> next = pools;
  i128 sum_dx = 0, sum_dy = 0;
  std::vector<NetSwap> ordered = plan.net;
  std::sort(ordered.begin(), ordered.end(),
            [](const NetSwap& a, const NetSwap& b) { return a.market_id < b.market_id; });
  for (const auto& n : ordered) {
    std::size_t i = index_of(next, n.market_id);
    next[i] = apply_net_delta(next[i], n.dx, n.dy);
    sum_dx = checked_add(sum_dx, n.dx);
    sum_dy = checked_add(sum_dy, n.dy);
  }

  // Pools gain exactly what the user pays and lose what the user and the
  // arbitrage take out.
  const bool x_in = plan.request.direction == Direction::x_to_y;
  const Asset in_asset = x_in ? Asset::x : Asset::y;
  const i128 in_amount = static_cast<i128>(plan.request.amount_in.value());
  const i128 out_amount = static_cast<i128>(plan.expected_out.value());
  const i128 want_in = in_amount - (plan.arb_asset == in_asset ? plan.arb_profit : 0);
  const i128 want_out = -out_amount - (plan.arb_asset != in_asset ? plan.arb_profit : 0);
  if ((x_in ? sum_dx : sum_dy) != want_in || (x_in ? sum_dy : sum_dx) != want_out) {
    fail(Errc::internal, "batch execution does not conserve assets");
  }

  ExecutionReport rep;
  rep.leaf = plan.leaf;
  rep.amount_out = plan.expected_out;
  rep.arb_profit = plan.arb_profit;
  rep.arb_asset = plan.arb_asset;
  rep.legs_executed = static_cast<int>(ordered.size());
  rep.pre = pools;
  rep.post = next;
  rep.cost_units = plan.cost_units;
  rep.counts = plan.counts;
  return {std::move(next), std::move(rep)};
}

std::vector<ReplayEntry> replay(const std::vector<StreamItem>& stream, std::vector<PoolState> pools,
                                ReplayMode mode, const EngineOptions& options,
                                std::vector<PoolState>* final_pools) {
  std::vector<ReplayEntry> out;
  out.reserve(stream.size());
  for (const auto& item : stream) {
    ReplayEntry e;
    e.seq = item.record ? item.record->seq : item.seq;
    if (!item.record) {
      e.error = item.error.empty() ? "malformed record" : item.error;
      out.push_back(std::move(e));
      continue;
    }
    const StreamRecord& rec = *item.record;
    try {
      const PoolState* hinted = nullptr;
      for (const auto& p : pools) {
        if (p.market_id == rec.market_hint) hinted = &p;
      }
      if (mode == ReplayMode::amm) {
        if (!hinted) fail(Errc::invalid_argument, "unknown market '" + rec.market_hint + "'");
        SwapResult r = apply_swap(*hinted, {hinted->market_id, rec.request.direction,
                                            rec.request.amount_in, rec.request.min_amount_out});
        pools[index_of(pools, hinted->market_id)] = r.pool;
        e.amount_out = r.amount_out;
        e.amm_out = r.amount_out;
        e.legs_executed = 1;
        e.cost_units = options.weights.swap;
        e.leaf = Leaf::routing_only;
      } else {
        e.amm_out = hinted ? quote(*hinted, rec.request.direction, rec.request.amount_in) : Amount{};
        BatchPlan bp = plan(rec.request, pools, options);
        auto [next, rep] = execute(bp, pools);
        pools = std::move(next);
        e.leaf = rep.leaf;
        e.amount_out = rep.amount_out;
        e.arb_profit = rep.arb_profit;
        e.arb_asset = rep.arb_asset;
        e.legs_executed = rep.legs_executed;
        e.cost_units = rep.cost_units;
      }
      e.routing_gain = signed_diff(e.amount_out, e.amm_out);
      e.ok = true;
    } catch (const Error& err) {
      e.error = err.what();
    }
    out.push_back(std::move(e));
  }
  if (final_pools) *final_pools = std::move(pools);
  return out;
}

}  // namespace ammlab
