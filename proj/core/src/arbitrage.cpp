#include "ammlab/arbitrage.hpp"

#include <algorithm>
#include <cmath>

#include "ammlab/error.hpp"

namespace ammlab {

std::string_view to_string(Asset a) noexcept { return a == Asset::x ? "x" : "y"; }

bool is_profitable(const PoolState& pool1, const PoolState& pool2) {
  if (!pool1.active() || !pool2.active()) return false;
  BigInt lhs = to_big(pool2.y) * to_big(pool1.x) * pool1.fee.denominator * pool2.fee.denominator;
  BigInt rhs = to_big(pool1.y) * to_big(pool2.x) * pool1.fee.numerator * pool2.fee.numerator;
  return lhs < rhs;
}

namespace {

struct ClosedForm {
  long double delta = 0;      // real maximizer
  long double curvature = 0;  // |profit''| at the maximizer
};

ClosedForm closed_form(const PoolState& p1, const PoolState& p2) {
  // With A = g1*g2*y1*x2, B = x1*y2, C = g1*(y2 + g2*y1) the optimum is
  // (sqrt(AB) - B) / C. Everything is scaled by den1*den2 so A - B is exact.
  const BigInt n1 = p1.fee.numerator, d1 = p1.fee.denominator;
  const BigInt n2 = p2.fee.numerator, d2 = p2.fee.denominator;
  const BigInt a = n1 * n2 * to_big(p1.y) * to_big(p2.x);
  const BigInt b = d1 * d2 * to_big(p1.x) * to_big(p2.y);
  if (a <= b) return {};
  const long double af = a.convert_to<long double>();
  const long double bf = b.convert_to<long double>();
  const long double diff = BigInt(a - b).convert_to<long double>();
  const long double c = BigInt(n1 * (d2 * to_big(p2.y) + n2 * to_big(p1.y))).convert_to<long double>();
  const long double root = std::sqrt(af) * std::sqrt(bf);
  ClosedForm out;
  out.delta = bf * diff / ((root + bf) * c);
  // 2C / sqrt(AB); both c and root carry the same den1*den2 scale.
  out.curvature = 2.0L * c / root;
  return out;
}

}  // namespace

long double optimal_input_real(const PoolState& pool1, const PoolState& pool2) {
  return closed_form(pool1, pool2).delta;
}

i128 round_trip_profit(const PoolState& pool1, const PoolState& pool2, Amount delta) {
  Amount mid = quote(pool1, Direction::x_to_y, delta);
  if (mid.is_zero()) return -static_cast<i128>(delta.value());
  Amount back = quote(pool2, Direction::y_to_x, mid);
  return signed_diff(back, delta);
}

Amount optimal_input(const PoolState& pool1, const PoolState& pool2) {
  if (!is_profitable(pool1, pool2)) {
    fail(Errc::not_profitable, "no profitable round trip from '" + pool1.market_id + "' to '" +
                                   pool2.market_id + "'");
  }
  const ClosedForm cf = closed_form(pool1, pool2);
  const long double g1 = pool1.fee.gamma();
  const long double x1 = to_long_double(pool1.x), y1 = to_long_double(pool1.y);
  // Input per unit of Y bought at the optimum.
  const long double grow = x1 + g1 * cf.delta;
  const long double step = grow * grow / (g1 * x1 * y1);

  u128 best = std::max<u128>(1, round_to_amount(cf.delta).value());
  i128 best_profit = round_trip_profit(pool1, pool2, Amount{best});
  auto dist = [&](u128 v) { return std::fabs(static_cast<long double>(v) - cf.delta); };
  auto consider = [&](u128 d) {
    const i128 p = round_trip_profit(pool1, pool2, Amount{d});
    if (p > best_profit || (p == best_profit && dist(d) < dist(best))) {
      best = d;
      best_profit = p;
    }
  };

  if (step >= 1) {
    // Coarse Y: the maximum sits at the smallest input buying some k units,
    // so walk k instead. Flooring moves profit by at most two units there.
    const long double k_star = g1 * cf.delta * y1 / grow;
    const long double kappa_k = cf.curvature * step * step;
    const long double half = kappa_k > 0 ? std::ceil(std::sqrt(8.0L / kappa_k)) + 2 : 65536.0L;
    const auto w = static_cast<u128>(std::clamp(half, 2.0L, 65536.0L));
    const u128 kc = static_cast<u128>(std::max(1.0L, std::round(k_star)));
    const u128 k_lo = kc > w ? kc - w : 1;
    const u128 k_hi = std::min(kc + w, pool1.y.value() - 1);
    const BigInt xd = to_big(pool1.x) * pool1.fee.denominator;
    for (u128 k = k_lo; k <= k_hi; ++k) {
      const BigInt kb = to_big(Amount{k});
      const BigInt den = (to_big(pool1.y) - kb) * pool1.fee.numerator;
      const BigInt d = (kb * xd + den - 1) / den;
      if (d >= (BigInt(1) << 127)) break;
      consider(amount_from_big(d).value());
    }
  } else {
    // Fine Y: scan inputs around the real optimum, wide enough to cover the
    // flooring noise of 1 + step units.
    const long double half =
        cf.curvature > 0 ? std::ceil(std::sqrt(4.0L * (1 + step) / cf.curvature)) + 2 : 4096.0L;
    const auto w = static_cast<u128>(std::clamp(half, 2.0L, 4096.0L));
    const u128 center = best;
    for (u128 d = center > w ? center - w : 1; d <= center + w; ++d) consider(d);
  }
  return Amount{best};
}

TwoPointResult execute_two_point(const PoolState& pool1, const PoolState& pool2, Amount delta) {
  if (delta.is_zero()) fail(Errc::precondition, "arbitrage input must be positive");
  SwapResult leg1 = apply_swap(pool1, {pool1.market_id, Direction::x_to_y, delta, {}});
  TwoPointResult r;
  r.intermediate = leg1.amount_out;
  r.pool1 = std::move(leg1.pool);
  if (r.intermediate.is_zero()) {
    r.pool2 = pool2;
    r.profit = -static_cast<i128>(delta.value());
    return r;
  }
  SwapResult leg2 = apply_swap(pool2, {pool2.market_id, Direction::y_to_x, r.intermediate, {}});
  r.pool2 = std::move(leg2.pool);
  r.profit = signed_diff(leg2.amount_out, delta);
  return r;
}

ArbPlan plan_two_point(const PoolState& a, const PoolState& b, Asset profit_asset) {
  // Profit in Y is profit in X on the mirrored pools.
  const PoolState pa = profit_asset == Asset::x ? a : mirrored(a);
  const PoolState pb = profit_asset == Asset::x ? b : mirrored(b);
  const bool forward = is_profitable(pa, pb);
  if (!forward && !is_profitable(pb, pa)) {
    fail(Errc::not_profitable, "no profitable arbitrage between '" + a.market_id + "' and '" +
                                   b.market_id + "'");
  }
  const PoolState& p1 = forward ? pa : pb;
  const PoolState& p2 = forward ? pb : pa;
  Amount delta = optimal_input(p1, p2);
  TwoPointResult r = execute_two_point(p1, p2, delta);
  if (r.profit <= 0) {
    fail(Errc::not_profitable, "integer rounding leaves no profit between '" + a.market_id +
                                   "' and '" + b.market_id + "'");
  }
  const Direction first = profit_asset == Asset::x ? Direction::x_to_y : Direction::y_to_x;
  ArbPlan plan;
  plan.profit_asset = profit_asset;
  plan.expected_profit = r.profit;
  plan.legs.push_back({p1.market_id, first, delta, r.intermediate});
  plan.legs.push_back({p2.market_id, opposite(first), r.intermediate,
                       magnitude(checked_add(static_cast<i128>(delta.value()), r.profit))});
  return plan;
}

VirtualPool aggregate(const std::vector<PoolState>& members) {
  VirtualPool v;
  for (const auto& m : members) {
    v.members.push_back(m.market_id);
    v.x += m.x;
    v.y += m.y;
  }
  return v;
}

double count_cost(int n_pools) {
  if (n_pools < 2) fail(Errc::precondition, "cost model needs at least two pools");
  if (n_pools == 2) return 160.22;
  if (n_pools == 3) return 270.44;
  return 217.80 + 42.42 * (n_pools - 1) + 17.80 * (2 * n_pools - 5);
}

OperationCounts predicted_counts(int n_pools) {
  if (n_pools < 2) fail(Errc::precondition, "cost model needs at least two pools");
  if (n_pools == 2) return {1, 0, 2};
  if (n_pools == 3) return {2, 1, 3};
  return {n_pools - 1, 2 * n_pools - 5, n_pools};
}

}  // namespace ammlab
