#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ammlab {

enum class Errc {
  arithmetic_overflow,
  invalid_pool,
  invalid_argument,
  precondition,
  swap_reverted,
  not_profitable,
  parse_error,
  io_error,
  saturation,
  internal,
};

std::string_view to_string(Errc code) noexcept;

/// Every domain failure in the library is reported as an Error carrying a
/// machine-readable code. The CLI maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace ammlab
