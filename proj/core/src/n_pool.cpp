#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ammlab/arbitrage.hpp"
#include "ammlab/error.hpp"
#include "ammlab/routing.hpp"

namespace ammlab {

bool any_profitable_pair(const std::vector<PoolState>& pools) {
  for (std::size_t i = 0; i < pools.size(); ++i) {
    for (std::size_t j = 0; j < pools.size(); ++j) {
      if (i != j && is_profitable(pools[i], pools[j])) return true;
    }
  }
  return false;
}

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

long double price(const PoolState& p) { return to_long_double(p.y) / to_long_double(p.x); }

// Works on pools in ascending y/x order and earns Y: Y goes into the cheap
// side, the X it buys is sold on the dear side.
class Narrowing {
 public:
  Narrowing(std::vector<PoolState> sorted, long double gamma)
      : m_(std::move(sorted)), gamma_(gamma) {}

  PoolState combined(std::size_t from, std::size_t to) const {
    PoolState agg = m_[from];
    agg.market_id = "aggregate";
    for (std::size_t i = from + 1; i <= to; ++i) {
      agg.x += m_[i].x;
      agg.y += m_[i].y;
    }
    return agg;
  }

  // Executes a round trip of `delta` Y from members [0, l] to members [r, n).
  void execute(std::size_t l, std::size_t r, Amount delta) {
    if (delta.is_zero()) return;
    std::vector<long double> w;
    for (std::size_t i = 0; i <= l; ++i) w.push_back(to_long_double(m_[i].y));
    std::vector<Amount> ins = detail::apportion(delta, w);
    Amount bought;
    for (std::size_t i = 0; i <= l; ++i) {
      if (ins[i].is_zero()) continue;
      bought += swap(i, Direction::y_to_x, ins[i]);
    }
    if (bought.is_zero()) return;
    w.clear();
    for (std::size_t i = r; i < m_.size(); ++i) w.push_back(to_long_double(m_[i].x));
    std::vector<Amount> outs = detail::apportion(bought, w);
    for (std::size_t i = r; i < m_.size(); ++i) {
      if (outs[i - r].is_zero()) continue;
      swap(i, Direction::x_to_y, outs[i - r]);
    }
  }

  // Pairwise round trip between two single pools.
  void execute_pair(std::size_t cheap, std::size_t dear, Amount delta) {
    Amount bought = swap(cheap, Direction::y_to_x, delta);
    if (!bought.is_zero()) swap(dear, Direction::x_to_y, bought);
  }

  std::vector<PoolState>& pools() { return m_; }
  std::vector<SwapAction>& legs() { return legs_; }
  i128 profit() const { return profit_; }
  long double gamma() const { return gamma_; }

 private:
  Amount swap(std::size_t i, Direction d, Amount in) {
    SwapResult r = apply_swap(m_[i], {m_[i].market_id, d, in, {}});
    m_[i] = std::move(r.pool);
    legs_.push_back({m_[i].market_id, d, in, r.amount_out});
    if (d == Direction::y_to_x) {
      profit_ = checked_sub(profit_, static_cast<i128>(in.value()));
    } else {
      profit_ = checked_add(profit_, static_cast<i128>(r.amount_out.value()));
    }
    return r.amount_out;
  }

  std::vector<PoolState> m_;
  long double gamma_;
  std::vector<SwapAction> legs_;
  i128 profit_ = 0;
};

// Smallest Y input on the cheap pool after which the pair is no longer
// profitable, found by doubling then bisection on executed states.
Amount clearing_input(const PoolState& cheap, const PoolState& dear) {
  auto cleared = [&](Amount d) {
    SwapResult a = apply_swap(cheap, {cheap.market_id, Direction::y_to_x, d, {}});
    PoolState dear2 = dear;
    if (!a.amount_out.is_zero()) {
      dear2 = apply_swap(dear, {dear.market_id, Direction::x_to_y, a.amount_out, {}}).pool;
    }
    return !is_profitable(mirrored(a.pool), mirrored(dear2));
  };
  u128 hi = 1;
  while (!cleared(Amount{hi})) {
    if (hi > (kU128Max >> 2)) fail(Errc::internal, "correction step does not converge");
    hi <<= 1;
  }
  u128 lo = hi >> 1;  // not cleared (or zero)
  while (hi - lo > 1) {
    u128 mid = lo + (hi - lo) / 2;
    if (cleared(Amount{mid})) hi = mid; else lo = mid;
  }
  return Amount{hi};
}

}  // namespace

NPoolResult n_pool_arbitrage(const std::vector<PoolState>& input, Asset profit_asset) {
  if (input.size() < 2) fail(Errc::precondition, "n-pool arbitrage needs at least two pools");
  detail::require_same_fee(input);
  for (const auto& p : input) {
    if (!p.active()) fail(Errc::invalid_pool, "pool '" + p.market_id + "' has a zero reserve");
  }
  std::set<std::string> ids;
  for (const auto& p : input) ids.insert(p.market_id);
  if (ids.size() != input.size()) fail(Errc::precondition, "market ids must be unique");

  // Profit in X is profit in Y on mirrored pools.
  std::vector<PoolState> work;
  for (const auto& p : input) work.push_back(profit_asset == Asset::y ? p : mirrored(p));
  std::vector<std::size_t> order(work.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    int c = compare_price(work[a], work[b], Direction::x_to_y);
    return c != 0 ? c < 0 : work[a].market_id < work[b].market_id;
  });
  std::vector<PoolState> sorted;
  for (std::size_t i : order) sorted.push_back(work[i]);

  Narrowing nw(sorted, work.front().fee.gamma());
  NPoolResult res;
  res.profit_asset = profit_asset;
  const std::size_t n = sorted.size();
  std::size_t l = 0, r = n - 1;
  const long double g = nw.gamma();

  while (true) {
    ++res.iterations;
    if (res.iterations > static_cast<int>(2 * (n - 1))) fail(Errc::internal, "narrowing loop did not terminate");
    PoolState left = nw.combined(0, l);
    PoolState right = nw.combined(r, n - 1);
    // Y in on the left is X->Y on the mirrored left pool.
    const PoolState ml = mirrored(left), mr = mirrored(right);
    if (!is_profitable(ml, mr)) break;
    ++res.counts.arbitrage_computations;
    const long double dstar = optimal_input_real(ml, mr);

    const long double xl = to_long_double(left.x), yl = to_long_double(left.y);
    const long double xr = to_long_double(right.x), yr = to_long_double(right.y);
    const long double out1 = g * dstar * xl / (yl + g * dstar);
    const long double out2 = g * out1 * yr / (xr + g * out1);
    const long double pl_after = (yl + dstar) / (xl - out1);
    const long double pr_after = (yr - out2) / (xr + out1);

    const bool shift_l = l + 1 < r && pl_after > price(nw.pools()[l + 1]);
    const bool shift_r = l < r - 1 && pr_after < price(nw.pools()[r - 1]);
    long double dl = kInf, dr = kInf;
    if (shift_l) {
      ++res.counts.sync_computations;
      const PoolState& next = nw.pools()[l + 1];
      dl = detail::volume_to_price(to_big(left.y), to_big(left.x), to_big(next.y), to_big(next.x), g);
    }
    if (shift_r) {
      ++res.counts.sync_computations;
      const PoolState& next = nw.pools()[r - 1];
      long double t = detail::volume_to_price(to_big(right.x), to_big(right.y), to_big(next.x),
                                              to_big(next.y), g);
      if (t < xl) dr = t * yl / (g * (xl - t));
    }

    if (shift_l && dl <= dr) {
      nw.execute(l, r, round_to_amount(dl));
      ++l;
      continue;
    }
    if (shift_r && std::isfinite(dr)) {
      nw.execute(l, r, round_to_amount(dr));
      --r;
      continue;
    }
    if (l == 0 && r == n - 1 && n == 2) {
      nw.execute_pair(0, 1, optimal_input(ml, mr));
    } else {
      nw.execute(l, r, round_to_amount(dstar));
    }
    break;
  }

  // Integer execution can leave the extreme pair a hair inside the
  // profitable region; clear it pairwise.
  const int max_corrections = static_cast<int>(4 * n + 16);
  while (true) {
    auto& ps = nw.pools();
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (compare_price(ps[i], ps[lo], Direction::x_to_y) < 0) lo = i;
      if (compare_price(ps[i], ps[hi], Direction::x_to_y) > 0) hi = i;
    }
    if (!is_profitable(mirrored(ps[lo]), mirrored(ps[hi]))) break;
    if (++res.corrections > max_corrections) fail(Errc::internal, "correction steps did not converge");
    nw.execute_pair(lo, hi, clearing_input(ps[lo], ps[hi]));
  }

  std::vector<PoolState> final_sorted = nw.pools();
  res.pools.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    PoolState p = final_sorted[k];
    res.pools[order[k]] = profit_asset == Asset::y ? p : mirrored(p);
    if (!(res.pools[order[k]] == input[order[k]])) ++res.counts.swaps;
  }
  res.legs = nw.legs();
  if (profit_asset == Asset::x) {
    for (auto& leg : res.legs) leg.direction = opposite(leg.direction);
  }
  res.profit = nw.profit();
  return res;
}

}  // namespace ammlab
