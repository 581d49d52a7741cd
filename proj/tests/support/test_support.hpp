#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "ammlab/error.hpp"
#include "ammlab/pool.hpp"
#include "ammlab/random.hpp"
#include "ammlab/serialize.hpp"

namespace ammlab::testing {

inline std::string fixture_path(const std::string& rel) { return std::string(AMMLAB_FIXTURE_DIR) + "/" + rel; }

inline json load_fixture(const std::string& rel) {
  std::ifstream in(fixture_path(rel));
  if (!in) fail(Errc::io_error, "missing fixture " + rel);
  json j;
  in >> j;
  return j;
}

inline PoolState pool(const std::string& id, u128 x, u128 y) { return make_pool(id, x, y); }

inline Amount amt(u128 v) { return Amount{v}; }

/// Universe of n pools where two deep pools sit at y/x prices p and about 2p
/// and the shallow rest lie close to one end or the other, alternating, so
/// the narrowing loop absorbs one pool per step.
inline std::vector<PoolState> cascade_universe(Rng& rng, int n) {
  const double depth = rng.log_uniform(1e10, 1e13);
  const double p = rng.log_uniform(0.01, 100.0);
  const double hi = p * rng.uniform(1.8, 2.2);
  auto make = [&](const std::string& id, double x, double price) {
    return make_pool(id, static_cast<u128>(std::llround(x)), static_cast<u128>(std::llround(x * price)));
  };
  std::vector<PoolState> pools{make("m0", depth, p), make("m1", depth * rng.uniform(0.95, 1.05), hi)};
  // Offsets grow along the absorption order: low side, high side, low side...
  std::vector<double> gaps;
  double g = rng.uniform(0.003, 0.006);
  for (int i = 0; i < n - 2; ++i, g *= rng.uniform(1.6, 2.0)) gaps.push_back(g);
  for (int i = 0; i < n - 2; ++i) {
    const double shallow = depth * rng.uniform(1e-4, 1e-3);
    const double price = i % 2 == 0 ? p * (1 + gaps[i]) : hi * (1 - gaps[i]);
    pools.push_back(make("m" + std::to_string(i + 2), shallow, price));
  }
  for (std::size_t i = pools.size(); i > 1; --i) std::swap(pools[i - 1], pools[rng.below(i)]);
  return pools;
}

}  // namespace ammlab::testing
