#include "ammlab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "ammlab/arbitrage.hpp"
#include "ammlab/error.hpp"

namespace ammlab {

std::string_view to_string(Objective o) noexcept {
  switch (o) {
    case Objective::route_output: return "route-output";
    case Objective::arb_profit: return "arb-profit";
    case Objective::price_gap: return "price-gap";
  }
  return "unknown";
}

Objective parse_objective(std::string_view text) {
  if (text == "route-output") return Objective::route_output;
  if (text == "arb-profit") return Objective::arb_profit;
  if (text == "price-gap") return Objective::price_gap;
  fail(Errc::parse_error, "unknown objective '" + std::string(text) + "'");
}

namespace {

Amount quote_or_zero(const PoolState& p, Direction d, u128 in) {
  return in == 0 ? Amount{} : quote(p, d, Amount{in});
}

}  // namespace

BruteRouteResult brute_route(const std::vector<PoolState>& pools, Direction d, Amount total_in,
                             SearchSpec spec) {
  if (pools.empty() || pools.size() > 3) fail(Errc::precondition, "brute_route handles one to three pools");
  if (total_in.is_zero()) fail(Errc::precondition, "route input must be positive");
  const u128 total = total_in.value();
  BruteRouteResult res;
  const std::size_t n = pools.size();
  if (n == 1) {
    res.split = {total_in};
    res.output = quote(pools[0], d, total_in);
    res.evaluations = 1;
    return res;
  }
  u128 step = spec.coarse_step.value();
  if (step == 0) step = std::max<u128>(1, total / (n == 2 ? 10000 : 300));
  if (step > total) fail(Errc::precondition, "grid step exceeds the routed amount; nothing to refine");

  std::vector<u128> cur(n, 0);
  Amount best_out;
  auto eval = [&](const std::vector<u128>& s) {
    ++res.evaluations;
    Amount out;
    for (std::size_t i = 0; i < n; ++i) out += quote_or_zero(pools[i], d, s[i]);
    return out;
  };
  auto consider = [&](const std::vector<u128>& s) {
    Amount out = eval(s);
    if (out > best_out || res.evaluations == 1) {
      best_out = out;
      cur = s;
    }
  };

  if (n == 2) {
    for (u128 a = 0;; a += step) {
      a = std::min(a, total);
      consider({a, total - a});
      if (a == total) break;
    }
  } else {
    for (u128 a = 0;; a += step) {
      a = std::min(a, total);
      for (u128 b = 0;; b += step) {
        b = std::min(b, total - a);
        consider({a, b, total - a - b});
        if (b == total - a) break;
      }
      if (a == total) break;
    }
  }

  // Pattern search: move h units between any two pools, halving h on failure.
  u128 h = step;
  int passes = 0;
  while (h >= 1 && passes < spec.refine_passes * 64) {
    ++passes;
    bool moved = false;
    for (std::size_t i = 0; i < n && !moved; ++i) {
      for (std::size_t j = 0; j < n && !moved; ++j) {
        if (i == j || cur[i] < h) continue;
        std::vector<u128> s = cur;
        s[i] -= h;
        s[j] += h;
        Amount out = eval(s);
        if (out > best_out) {
          best_out = out;
          cur = std::move(s);
          moved = true;
        }
      }
    }
    if (!moved) {
      if (h == 1) break;
      h /= 2;
    }
  }
  for (u128 v : cur) res.split.push_back(Amount{v});
  res.output = best_out;
  return res;
}

BruteArbResult brute_arb(const PoolState& pool1, const PoolState& pool2, SearchSpec spec) {
  if (!pool1.active() || !pool2.active()) fail(Errc::invalid_pool, "brute_arb needs active pools");
  BruteArbResult res;
  auto profit = [&](u128 d) {
    ++res.evaluations;
    return round_trip_profit(pool1, pool2, Amount{d});
  };
  const u128 lo = std::max<u128>(1, spec.lo.value());
  u128 hi = spec.hi.value();
  if (hi == 0) hi = 4 * std::max(pool1.x.value(), pool2.x.value());
  if (hi <= lo) fail(Errc::precondition, "search range is empty");

  // Log grid plus a linear grid, so both small and large optima are bracketed.
  std::vector<u128> grid;
  const int points = 2000;
  const long double llo = std::log(static_cast<long double>(lo));
  const long double lhi = std::log(static_cast<long double>(hi));
  for (int i = 0; i <= points; ++i) {
    grid.push_back(static_cast<u128>(std::exp(llo + (lhi - llo) * i / points)));
    grid.push_back(lo + (hi - lo) / points * static_cast<u128>(i));
  }
  grid.push_back(hi);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  grid.erase(std::remove_if(grid.begin(), grid.end(), [&](u128 v) { return v < lo || v > hi; }),
             grid.end());

  std::vector<i128> vals(grid.size());
  std::size_t bi = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = profit(grid[i]);
    if (vals[i] > vals[bi]) bi = i;
  }
  u128 a = grid[bi == 0 ? 0 : bi - 1];
  u128 b = grid[bi + 1 < grid.size() ? bi + 1 : bi];

  // Golden-section narrowing on the bracket.
  const long double phi = 0.6180339887498948482L;
  while (b - a > 64) {
    u128 c = b - static_cast<u128>((b - a) * phi);
    u128 e = a + static_cast<u128>((b - a) * phi);
    if (c >= e) break;
    if (profit(c) >= profit(e)) b = e; else a = c;
  }

  u128 best = grid[bi];
  i128 best_p = vals[bi];
  const u128 window = 2048;
  const u128 s_lo = std::max(lo, a > window ? a - window : lo);
  const u128 s_hi = std::min(hi, b + window);

  // Walk the smallest inputs buying k0-R .. k0+R units of Y. Within one
  // such step the profit only falls, so every local maximum is a step start.
  auto bought = [&](u128 d) { return quote(pool1, Direction::x_to_y, Amount{d}).value(); };
  auto first_buying = [&](u128 k, u128 from) {
    if (bought(from) >= k) return from;
    u128 stride = 1;
    while (from + stride < hi && bought(from + stride) < k) stride *= 2;
    u128 a2 = from + stride / 2, b2 = std::min(hi, from + stride);
    if (bought(b2) < k) return hi + 1;
    while (b2 - a2 > 1) {
      u128 m = a2 + (b2 - a2) / 2;
      if (bought(m) >= k) b2 = m; else a2 = m;
    }
    return b2;
  };
  std::vector<u128> maximizers;
  auto record = [&](u128 v, i128 p) {
    if (p > best_p) {
      best_p = p;
      best = v;
      maximizers.clear();
    }
    if (p == best_p) maximizers.push_back(v);
  };
  for (u128 v = s_lo; v <= s_hi; ++v) record(v, profit(v));
  const u128 k0 = bought(best);
  const u128 reach = 4096;
  u128 cursor = lo;
  for (u128 k = k0 > reach ? k0 - reach : 1; k <= k0 + reach; ++k) {
    cursor = first_buying(k, cursor);
    if (cursor > hi) break;
    record(cursor, profit(cursor));
  }

  // Extend the run of equal profit around every maximizer found.
  auto extend = [&](u128 from, bool up) {
    u128 edge = from;
    for (int k = 0; k < 4096; ++k) {
      if (up ? edge >= hi : edge <= lo) return edge;
      u128 nxt = up ? edge + 1 : edge - 1;
      if (profit(nxt) != best_p) return edge;
      edge = nxt;
    }
    u128 stride = 1;
    while (true) {
      u128 nxt = up ? std::min(hi, edge + stride) : (edge > lo + stride ? edge - stride : lo);
      if (nxt == edge || profit(nxt) != best_p) break;
      edge = nxt;
      stride *= 2;
    }
    return edge;
  };
  const auto [mn, mx] = std::minmax_element(maximizers.begin(), maximizers.end());
  res.argmax = Amount{best};
  res.profit = best_p;
  res.plateau_lo = Amount{extend(*mn, false)};
  res.plateau_hi = Amount{extend(*mx, true)};

  // Side check: 1000 samples rise then fall, allowing for flooring noise of
  // one unit of X plus the X value of one unit of Y.
  const u128 top = std::min(hi, std::max<u128>(best * 4, lo + 1000));
  std::vector<i128> samples;
  std::size_t peak = 0;
  for (int i = 0; i < 1000; ++i) {
    samples.push_back(profit(lo + (top - lo) / 999 * static_cast<u128>(i)));
    if (samples.back() > samples[peak]) peak = samples.size() - 1;
  }
  const i128 noise = 2 + static_cast<i128>(quote(pool2, Direction::y_to_x, Amount{1}).value());
  i128 run = samples.front();
  for (std::size_t i = 1; i <= peak; ++i) {
    if (samples[i] < run - noise) res.unimodal = false;
    run = std::max(run, samples[i]);
  }
  run = samples[peak];
  for (std::size_t i = peak + 1; i < samples.size(); ++i) {
    if (samples[i] > run + noise) res.unimodal = false;
    run = std::min(run, samples[i]);
  }
  return res;
}

Amount brute_sync_threshold(const PoolState& rich, const PoolState& poor, Direction d) {
  if (compare_price(rich, poor, d) <= 0) return Amount{};
  const BigInt x1 = to_big(rich.reserve_in(d)), y1 = to_big(rich.reserve_out(d));
  const BigInt x2 = to_big(poor.reserve_in(d)), y2 = to_big(poor.reserve_out(d));
  const BigInt num = rich.fee.numerator, den = rich.fee.denominator;
  // Post price x1*y1*den / ((x1+v)(x1*den + v*num)) <= y2/x2, cross-multiplied.
  auto reached = [&](u128 v) {
    BigInt vb = to_big(Amount{v});
    return x1 * y1 * den * x2 <= (x1 + vb) * (x1 * den + vb * num) * y2;
  };
  u128 hi = 1;
  while (!reached(hi)) hi <<= 1;
  u128 lo = hi >> 1;
  if (lo == 0 && reached(0)) return Amount{};
  while (hi - lo > 1) {
    u128 mid = lo + (hi - lo) / 2;
    if (reached(mid)) hi = mid; else lo = mid;
  }
  return Amount{hi};
}

Rational rational_swap(const PoolState& pool, const SwapAction& action) {
  if (!pool.active()) fail(Errc::invalid_pool, "pool '" + pool.market_id + "' has a zero reserve");
  RationalPool rp = to_rational(pool);
  return rational_apply(rp, action.direction, Rational(to_big(action.amount_in)));
}

RationalPool to_rational(const PoolState& p) {
  return RationalPool{Rational(to_big(p.x)), Rational(to_big(p.y)), p.fee};
}

Rational rational_apply(RationalPool& pool, Direction d, const Rational& amount_in) {
  Rational& rin = d == Direction::x_to_y ? pool.x : pool.y;
  Rational& rout = d == Direction::x_to_y ? pool.y : pool.x;
  const Rational g = pool.fee.exact();
  Rational out = amount_in * g * rout / (rin + amount_in * g);
  rin += amount_in;
  rout -= out;
  return out;
}

std::pair<PoolState, PoolState> random_profitable_pair(Rng& rng, double lo, double hi) {
  while (true) {
    PoolState a{"p1", rng.log_uniform_amount(lo, hi), rng.log_uniform_amount(lo, hi), {}};
    PoolState b{"p2", rng.log_uniform_amount(lo, hi), rng.log_uniform_amount(lo, hi), {}};
    if (!is_profitable(a, b)) {
      if (!is_profitable(b, a)) continue;
      std::swap(a, b);
      a.market_id = "p1";
      b.market_id = "p2";
    }
    const long double d = optimal_input_real(a, b);
    if (d < 1) continue;
    if (round_trip_profit(a, b, round_to_amount(std::max(1.0L, d))) <= 0) continue;
    return {a, b};
  }
}

RouteInstance random_route_instance(Rng& rng, int n, double lo, double hi) {
  RouteInstance inst;
  double price = rng.log_uniform(0.01, 100.0);
  double x0 = rng.log_uniform(lo, hi);
  for (int i = 0; i < n; ++i) {
    if (i > 0) price /= rng.log_uniform(1.01, 4.0);
    double x = i == 0 ? x0 : std::clamp(x0 * rng.log_uniform(0.01, 100.0), lo, hi);
    double y = std::max(1000.0, x * price);
    inst.pools.push_back(PoolState{"m" + std::to_string(i), round_to_amount(x), round_to_amount(y), {}});
  }
  for (int i = n - 1; i > 0; --i) std::swap(inst.pools[i], inst.pools[rng.below(i + 1)]);
  inst.total_in = round_to_amount(std::max(1.0, x0 * rng.log_uniform(1e-3, 2.0)));
  return inst;
}

}  // namespace ammlab
