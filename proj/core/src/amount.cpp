#include "ammlab/amount.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ammlab/error.hpp"

namespace ammlab {

Amount Amount::parse(std::string_view text) {
  if (text.empty()) fail(Errc::parse_error, "empty amount");
  u128 v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      fail(Errc::parse_error, "invalid amount '" + std::string(text) + "'");
    }
    u128 next = 0;
    if (__builtin_mul_overflow(v, u128{10}, &next) ||
        __builtin_add_overflow(next, u128(c - '0'), &next)) {
      fail(Errc::arithmetic_overflow, "amount exceeds 128 bits: " + std::string(text));
    }
    v = next;
  }
  return Amount{v};
}

std::string Amount::str() const { return to_string(v_); }

Amount operator+(Amount a, Amount b) {
  u128 r = 0;
  if (__builtin_add_overflow(a.v_, b.v_, &r)) {
    fail(Errc::arithmetic_overflow, "amount addition overflows 128 bits");
  }
  return Amount{r};
}

Amount operator-(Amount a, Amount b) {
  if (b.v_ > a.v_) {
    fail(Errc::arithmetic_overflow, "amount subtraction underflows: " + a.str() + " - " + b.str());
  }
  return Amount{a.v_ - b.v_};
}

Amount operator*(Amount a, Amount b) {
  u128 r = 0;
  if (__builtin_mul_overflow(a.v_, b.v_, &r)) {
    fail(Errc::arithmetic_overflow, "amount multiplication overflows 128 bits");
  }
  return Amount{r};
}

std::ostream& operator<<(std::ostream& os, Amount a) { return os << a.str(); }

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(i128 v) {
  if (v >= 0) return to_string(static_cast<u128>(v));
  // -(v + 1) + 1 avoids overflow on the most negative value.
  return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
}

i128 parse_i128(std::string_view text) {
  bool negative = !text.empty() && text.front() == '-';
  if (negative) text.remove_prefix(1);
  u128 mag = Amount::parse(text).value();
  if (mag > static_cast<u128>(kI128Max)) fail(Errc::arithmetic_overflow, "signed amount exceeds i128");
  return negative ? -static_cast<i128>(mag) : static_cast<i128>(mag);
}

BigInt to_big(Amount a) {
  BigInt r = static_cast<std::uint64_t>(a.value() >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(a.value());
  return r;
}

BigInt to_big(i128 v) {
  BigInt r = to_big(magnitude(v));
  return v < 0 ? BigInt(-r) : r;
}

Amount amount_from_big(const BigInt& v) {
  if (v < 0 || boost::multiprecision::msb(v + 1) >= 128) {
    if (v != 0) fail(Errc::arithmetic_overflow, "value does not fit an unsigned 128-bit amount");
  }
  const BigInt mask = (BigInt(1) << 64) - 1;
  u128 hi = static_cast<std::uint64_t>((v >> 64) & mask);
  u128 lo = static_cast<std::uint64_t>(v & mask);
  return Amount{(hi << 64) | lo};
}

long double to_long_double(Amount a) noexcept {
  return static_cast<long double>(a.value());
}

long double to_long_double(const Rational& r) {
  return boost::multiprecision::numerator(r).convert_to<long double>() /
         boost::multiprecision::denominator(r).convert_to<long double>();
}

Amount round_to_amount(long double v) {
  if (!(v > 0)) return Amount{};
  if (v >= 3.4e38L) fail(Errc::arithmetic_overflow, "rounded value exceeds 128 bits");
  return Amount{static_cast<u128>(std::nearbyintl(v))};
}

Amount floor_to_amount(long double v) {
  if (!(v > 0)) return Amount{};
  if (v >= 3.4e38L) fail(Errc::arithmetic_overflow, "value exceeds 128 bits");
  return Amount{static_cast<u128>(std::floor(v))};
}

i128 signed_diff(Amount a, Amount b) {
  if (a >= b) {
    u128 d = a.value() - b.value();
    if (d > static_cast<u128>(kI128Max)) fail(Errc::arithmetic_overflow, "difference exceeds i128");
    return static_cast<i128>(d);
  }
  u128 d = b.value() - a.value();
  if (d > static_cast<u128>(kI128Max)) fail(Errc::arithmetic_overflow, "difference exceeds i128");
  return -static_cast<i128>(d);
}

i128 checked_add(i128 a, i128 b) {
  i128 r = 0;
  if (__builtin_add_overflow(a, b, &r)) fail(Errc::arithmetic_overflow, "signed addition overflows");
  return r;
}

i128 checked_sub(i128 a, i128 b) {
  i128 r = 0;
  if (__builtin_sub_overflow(a, b, &r)) fail(Errc::arithmetic_overflow, "signed subtraction overflows");
  return r;
}

Amount magnitude(i128 v) {
  if (v >= 0) return Amount{static_cast<u128>(v)};
  return Amount{static_cast<u128>(-(v + 1)) + 1};
}

std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

}  // namespace ammlab
