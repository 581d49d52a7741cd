#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ammlab {

using u128 = unsigned __int128;
using i128 = __int128;

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr u128 kU128Max = ~u128{0};
inline constexpr i128 kI128Max = static_cast<i128>(kU128Max >> 1);

/// A quantity of one asset in its smallest indivisible unit.
///
/// Arithmetic is checked: overflow and underflow throw Errc::arithmetic_overflow
/// instead of wrapping.
class Amount {
 public:
  constexpr Amount() noexcept = default;
  constexpr explicit Amount(u128 v) noexcept : v_(v) {}

  /// Parses a non-negative decimal integer (no sign, no exponent, no separators).
  static Amount parse(std::string_view text);

  constexpr u128 value() const noexcept { return v_; }
  constexpr bool is_zero() const noexcept { return v_ == 0; }
  std::string str() const;

  friend constexpr auto operator<=>(Amount, Amount) noexcept = default;
  friend constexpr bool operator==(Amount, Amount) noexcept = default;

  friend Amount operator+(Amount a, Amount b);
  friend Amount operator-(Amount a, Amount b);
  friend Amount operator*(Amount a, Amount b);
  Amount& operator+=(Amount o) { return *this = *this + o; }
  Amount& operator-=(Amount o) { return *this = *this - o; }

 private:
  u128 v_ = 0;
};

std::ostream& operator<<(std::ostream& os, Amount a);

std::string to_string(u128 v);
std::string to_string(i128 v);
i128 parse_i128(std::string_view text);

BigInt to_big(Amount a);
BigInt to_big(i128 v);
/// Throws arithmetic_overflow when the value is negative or exceeds 128 bits.
Amount amount_from_big(const BigInt& v);

long double to_long_double(Amount a) noexcept;
long double to_long_double(const Rational& r);

/// Rounds to the nearest integer; negative inputs clamp to zero.
Amount round_to_amount(long double v);
Amount floor_to_amount(long double v);

/// a - b as a signed value; throws when the difference does not fit in i128.
i128 signed_diff(Amount a, Amount b);
i128 checked_add(i128 a, i128 b);
i128 checked_sub(i128 a, i128 b);
Amount magnitude(i128 v);

std::string to_string(const Rational& r);

}  // namespace ammlab
