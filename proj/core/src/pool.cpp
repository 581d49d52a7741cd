#include "ammlab/pool.hpp"

#include <algorithm>
#include <cctype>

#include "ammlab/error.hpp"

namespace ammlab {

Direction opposite(Direction d) noexcept {
  return d == Direction::x_to_y ? Direction::y_to_x : Direction::x_to_y;
}

std::string_view to_string(Direction d) noexcept {
  return d == Direction::x_to_y ? "x_to_y" : "y_to_x";
}

Direction parse_direction(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (c != '_' && c != '-') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (t == "xtoy" || t == "x2y" || t == "xy") return Direction::x_to_y;
  if (t == "ytox" || t == "y2x" || t == "yx") return Direction::y_to_x;
  fail(Errc::parse_error, "unknown direction '" + std::string(text) + "'");
}

void FeeRate::validate() const {
  if (denominator == 0 || numerator == 0 || numerator > denominator) {
    fail(Errc::invalid_argument, "fee rate must satisfy 0 < numerator <= denominator");
  }
}

PoolState make_pool(std::string market_id, u128 x, u128 y, FeeRate fee) {
  return PoolState{std::move(market_id), Amount{x}, Amount{y}, fee};
}

PoolState mirrored(const PoolState& p) { return PoolState{p.market_id, p.y, p.x, p.fee}; }

namespace {

void require_active(const PoolState& pool) {
  if (!pool.active()) fail(Errc::invalid_pool, "pool '" + pool.market_id + "' has a zero reserve");
  pool.fee.validate();
}

}  // namespace

Amount quote(const PoolState& pool, Direction d, Amount amount_in) {
  require_active(pool);
  if (amount_in.is_zero()) fail(Errc::precondition, "swap input must be positive");
  const u128 num = pool.fee.numerator;
  const u128 den = pool.fee.denominator;
  const u128 r_in = pool.reserve_in(d).value();
  const u128 r_out = pool.reserve_out(d).value();

  u128 in_fee = 0, base = 0, denom = 0;
  if (__builtin_mul_overflow(amount_in.value(), num, &in_fee) ||
      __builtin_mul_overflow(r_in, den, &base) ||
      __builtin_add_overflow(base, in_fee, &denom)) {
    fail(Errc::arithmetic_overflow, "swap denominator exceeds 128 bits");
  }
  u128 numer = 0;
  if (!__builtin_mul_overflow(in_fee, r_out, &numer)) return Amount{numer / denom};
  BigInt wide = to_big(Amount{in_fee}) * to_big(Amount{r_out});
  return amount_from_big(wide / to_big(Amount{denom}));
}

SwapResult apply_swap(const PoolState& pool, const SwapAction& action) {
  Amount out = quote(pool, action.direction, action.amount_in);
  if (out < action.min_amount_out) {
    fail(Errc::swap_reverted, "swap on '" + pool.market_id + "' yields " + out.str() +
                                  " below minimum " + action.min_amount_out.str());
  }
  PoolState next = pool;
  if (action.direction == Direction::x_to_y) {
    next.x = pool.x + action.amount_in;
    next.y = pool.y - out;
  } else {
    next.y = pool.y + action.amount_in;
    next.x = pool.x - out;
  }
  return {std::move(next), out};
}

Rational marginal_price(const PoolState& pool, Direction d) {
  require_active(pool);
  return Rational(to_big(pool.reserve_out(d)), to_big(pool.reserve_in(d)));
}

int compare_price(const PoolState& a, const PoolState& b, Direction d) {
  BigInt lhs = to_big(a.reserve_out(d)) * to_big(b.reserve_in(d));
  BigInt rhs = to_big(b.reserve_out(d)) * to_big(a.reserve_in(d));
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

BigInt invariant(const PoolState& pool) { return to_big(pool.x) * to_big(pool.y); }

PoolState apply_net_delta(const PoolState& pool, i128 dx, i128 dy) {
  require_active(pool);
  PoolState next = pool;
  if (dx == 0 && dy == 0) return next;
  if (dx <= 0 && dy <= 0) {
    fail(Errc::swap_reverted, "net change on '" + pool.market_id + "' withdraws both assets");
  }
  next.x = dx >= 0 ? pool.x + magnitude(dx) : pool.x - magnitude(dx);
  next.y = dy >= 0 ? pool.y + magnitude(dy) : pool.y - magnitude(dy);
  if (next.x.is_zero() || next.y.is_zero()) {
    fail(Errc::swap_reverted, "net change on '" + pool.market_id + "' drains a reserve");
  }
  if (dx >= 0 && dy >= 0) return next;

  // One side flows in, the other out: fee applies to the net input.
  const bool x_in = dx > 0;
  const BigInt r_in = to_big(x_in ? pool.x : pool.y);
  const BigInt r_out = to_big(x_in ? pool.y : pool.x);
  const BigInt in = to_big(magnitude(x_in ? dx : dy));
  const BigInt out = to_big(magnitude(x_in ? dy : dx));
  const BigInt num = pool.fee.numerator;
  const BigInt den = pool.fee.denominator;
  if ((r_in * den + in * num) * (r_out - out) < r_in * r_out * den) {
    fail(Errc::swap_reverted, "net change on '" + pool.market_id + "' violates the fee-adjusted invariant");
  }
  return next;
}

}  // namespace ammlab
