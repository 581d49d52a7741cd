#include "ammlab/error.hpp"

namespace ammlab {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::arithmetic_overflow: return "arithmetic_overflow";
    case Errc::invalid_pool: return "invalid_pool";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::precondition: return "precondition";
    case Errc::swap_reverted: return "swap_reverted";
    case Errc::not_profitable: return "not_profitable";
    case Errc::parse_error: return "parse_error";
    case Errc::io_error: return "io_error";
    case Errc::saturation: return "saturation";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ammlab
