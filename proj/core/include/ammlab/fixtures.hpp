#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ammlab/oracle.hpp"
#include "ammlab/serialize.hpp"

namespace ammlab {

/// Fixture kinds: swap, arb, route2, route3, sync.
std::vector<std::string> fixture_kinds();

/// Oracle fixtures as a JSON array of {inputs, oracle_output, seed, spec}.
/// Instance i of a kind is generated from derive_seed(seed, kind, i), which is
/// the value stored in "seed".
json generate_fixtures(const std::string& kind, int count, std::uint64_t seed, int jobs = 1);

json to_json(const SearchSpec& spec);

struct FixtureCheck {
  std::string kind;
  std::size_t count = 0;
  std::size_t failures = 0;
  double max_rel_error = 0;
  std::vector<std::string> messages;  // one per failure
};

/// Recomputes every closed form against the stored oracle output. Swap
/// fixtures must match exactly; the others fail above `tolerance` relative.
FixtureCheck check_fixtures(const json& items, double tolerance);

}  // namespace ammlab
