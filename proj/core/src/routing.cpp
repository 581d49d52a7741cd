#include "ammlab/routing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ammlab/error.hpp"

namespace ammlab {

namespace detail {

Amount min_input(const PoolState& pool, Direction d, Amount out) {
  if (out.is_zero()) return Amount{};
  if (out >= pool.reserve_out(d)) fail(Errc::precondition, "output exceeds the pool reserve");
  const BigInt num = to_big(out) * to_big(pool.reserve_in(d)) * pool.fee.denominator;
  const BigInt den = (to_big(pool.reserve_out(d)) - to_big(out)) * pool.fee.numerator;
  return amount_from_big((num + den - 1) / den);
}

long double volume_to_price(const BigInt& rin, const BigInt& rout, const BigInt& target_in,
                            const BigInt& target_out, long double gamma) {
  // g = rout / P - rin with P = target_out / target_in, kept exact until here.
  BigInt g_num = rout * target_in - rin * target_out;
  if (g_num <= 0) return 0.0L;
  const long double g = g_num.convert_to<long double>() / target_out.convert_to<long double>();
  const long double r = rin.convert_to<long double>();
  const long double b = (1.0L + gamma) * r;
  // Stable form of the positive root of gamma*d^2 + (1+gamma)*r*d - r*g = 0.
  return 2.0L * r * g / (b + std::sqrt(b * b + 4.0L * gamma * r * g));
}

std::vector<Amount> apportion(Amount total, const std::vector<long double>& shares) {
  std::vector<Amount> out(shares.size());
  if (shares.empty()) return out;
  long double sum = 0;
  for (long double s : shares) sum += std::max(0.0L, s);
  const long double t = to_long_double(total);
  if (!(sum > 0)) {
    out[0] = total;
    return out;
  }
  std::vector<long double> frac(shares.size());
  Amount assigned;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    long double exact = std::max(0.0L, shares[i]) / sum * t;
    Amount fl = floor_to_amount(exact);
    if (assigned + fl > total) fl = total - assigned;
    out[i] = fl;
    assigned += fl;
    frac[i] = exact - to_long_double(fl);
  }
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  Amount left = total - assigned;
  for (std::size_t k = 0; !left.is_zero(); k = (k + 1) % order.size()) {
    out[order[k]] += Amount{1};
    left -= Amount{1};
    // Float drift can leave more units than legs; the largest share absorbs them.
    if (k + 1 == order.size() && !left.is_zero()) {
      out[order[0]] += left;
      break;
    }
  }
  return out;
}

void require_same_fee(const std::vector<PoolState>& pools) {
  for (const auto& p : pools) {
    p.fee.validate();
    if (!(p.fee == pools.front().fee)) {
      fail(Errc::precondition, "pools '" + pools.front().market_id + "' and '" + p.market_id +
                                   "' have different fees");
    }
  }
}

}  // namespace detail

long double sync_threshold_real(const PoolState& rich, const PoolState& poor, Direction d) {
  detail::require_same_fee({rich, poor});
  if (!rich.active() || !poor.active()) fail(Errc::invalid_pool, "sync threshold needs active pools");
  int c = compare_price(rich, poor, d);
  if (c < 0) {
    fail(Errc::precondition, "pool '" + rich.market_id + "' does not offer the better price");
  }
  if (c == 0) return 0.0L;
  long double v = detail::volume_to_price(to_big(rich.reserve_in(d)), to_big(rich.reserve_out(d)),
                                          to_big(poor.reserve_in(d)), to_big(poor.reserve_out(d)),
                                          rich.fee.gamma());
  if (!std::isfinite(v) || v < 0) fail(Errc::internal, "synchronization root is not a finite positive value");
  return v;
}

Amount sync_threshold(const PoolState& rich, const PoolState& poor, Direction d) {
  return round_to_amount(sync_threshold_real(rich, poor, d));
}

long double sync_threshold_approx(const PoolState& rich, const PoolState& poor) {
  const long double x1 = to_long_double(rich.x), y1 = to_long_double(rich.y);
  const long double x2 = to_long_double(poor.x), y2 = to_long_double(poor.y);
  return 1.002L * (std::sqrt(x1 * y2 * (2.257e-6L * x1 * y2 + x2 * y1)) - x1 * y2) / y2;
}

bool within_fee_band(const PoolState& a, const PoolState& b, Direction d) {
  const PoolState& hi = compare_price(a, b, d) >= 0 ? a : b;
  const PoolState& lo = &hi == &a ? b : a;
  BigInt lhs = to_big(lo.reserve_out(d)) * to_big(hi.reserve_in(d)) * a.fee.denominator *
               b.fee.denominator;
  BigInt rhs = to_big(hi.reserve_out(d)) * to_big(lo.reserve_in(d)) * a.fee.numerator *
               b.fee.numerator;
  return lhs >= rhs;
}

Rational split_ratio(const PoolState& pool1, const PoolState& pool2) {
  if (!pool1.active() || !pool2.active()) fail(Errc::invalid_pool, "split ratio needs active pools");
  if (!within_fee_band(pool1, pool2, Direction::x_to_y)) {
    fail(Errc::precondition, "pools '" + pool1.market_id + "' and '" + pool2.market_id +
                                 "' are not price-synchronized");
  }
  return Rational(to_big(pool1.x), to_big(pool1.x) + to_big(pool2.x));
}

Amount evaluate_split(const std::vector<PoolState>& pools, Direction d,
                      const std::vector<Amount>& inputs) {
  Amount total;
  for (std::size_t i = 0; i < pools.size() && i < inputs.size(); ++i) {
    if (!inputs[i].is_zero()) total += quote(pools[i], d, inputs[i]);
  }
  return total;
}

RoutePlan route(const std::vector<PoolState>& pools, Direction d, Amount total_in) {
  if (pools.empty()) fail(Errc::precondition, "route needs at least one pool");
  if (total_in.is_zero()) fail(Errc::precondition, "route input must be positive");
  detail::require_same_fee(pools);
  for (const auto& p : pools) {
    if (!p.active()) fail(Errc::invalid_pool, "pool '" + p.market_id + "' has a zero reserve");
  }

  std::vector<std::size_t> order(pools.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    int c = compare_price(pools[a], pools[b], d);
    return c != 0 ? c > 0 : pools[a].market_id < pools[b].market_id;
  });

  const long double gamma = pools.front().fee.gamma();
  auto base_volume = [&](std::size_t member, std::size_t target) {
    const PoolState& p = pools[order[member]];
    const PoolState& t = pools[order[target]];
    return detail::volume_to_price(to_big(p.reserve_in(d)), to_big(p.reserve_out(d)),
                                   to_big(t.reserve_in(d)), to_big(t.reserve_out(d)), gamma);
  };
  auto leveling = [&](std::size_t target) {
    long double sum = 0;
    for (std::size_t i = 0; i < target; ++i) sum += base_volume(i, target);
    return sum;
  };

  const long double total = to_long_double(total_in);
  std::size_t active = 1;
  while (active < order.size() && leveling(active) < total) ++active;

  // Members are brought to the price of the last active pool, then share the
  // rest in proportion to their input reserves at that common price.
  std::vector<long double> share(active);
  std::vector<long double> depth(active);
  long double used = 0, depth_sum = 0;
  for (std::size_t i = 0; i < active; ++i) {
    share[i] = base_volume(i, active - 1);
    used += share[i];
    depth[i] = to_long_double(pools[order[i]].reserve_in(d)) + share[i];
    depth_sum += depth[i];
  }
  const long double residual = std::max(0.0L, total - used);
  for (std::size_t i = 0; i < active; ++i) share[i] += residual * depth[i] / depth_sum;

  std::vector<Amount> amounts = detail::apportion(total_in, share);
  amounts.resize(order.size());

  auto out_of = [&](std::size_t i, Amount in) {
    return in.is_zero() ? Amount{} : quote(pools[order[i]], d, in);
  };
  // Trim every leg to the smallest input giving the same output and hand the
  // freed units to the leg that turns them into the most output.
  for (int round = 0; round < 4; ++round) {
    Amount slack;
    for (std::size_t i = 0; i < amounts.size(); ++i) {
      if (amounts[i].is_zero()) continue;
      const Amount need = detail::min_input(pools[order[i]], d, out_of(i, amounts[i]));
      slack += amounts[i] - need;
      amounts[i] = need;
    }
    if (slack.is_zero()) break;
    std::size_t to = 0;
    Amount best_gain;
    for (std::size_t i = 0; i < amounts.size(); ++i) {
      const Amount gain = out_of(i, amounts[i] + slack) - out_of(i, amounts[i]);
      if (gain > best_gain) {
        best_gain = gain;
        to = i;
      }
    }
    amounts[to] += slack;
    if (best_gain.is_zero()) break;
  }

  RoutePlan plan;
  plan.direction = d;
  plan.total_in = total_in;
  plan.leveling_volume = pools.size() > 1 ? round_to_amount(leveling(order.size() - 1)) : Amount{};
  for (std::size_t i = 0; i < amounts.size(); ++i) {
    if (amounts[i].is_zero()) continue;
    const PoolState& p = pools[order[i]];
    Amount out = quote(p, d, amounts[i]);
    plan.legs.push_back({p.market_id, amounts[i], out});
    plan.expected_total_out += out;
  }

  Amount best_single;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Amount q = quote(pools[order[i]], d, total_in);
    if (q > best_single) {
      best_single = q;
      best_index = i;
    }
  }
  if (best_single > plan.expected_total_out) {
    plan.legs = {{pools[order[best_index]].market_id, total_in, best_single}};
    plan.expected_total_out = best_single;
    plan.single_pool_fallback = true;
  }
  return plan;
}

}  // namespace ammlab
