#pragma once

#include <cstdint>
#include <random>

#include "ammlab/amount.hpp"

namespace ammlab {

/// Seeded generator used by every randomized component.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_); }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(eng_);
  }
  double log_uniform(double lo, double hi);
  Amount log_uniform_amount(double lo, double hi);
  double normal(double mean, double stddev) { return std::normal_distribution<double>(mean, stddev)(eng_); }
  double exponential(double mean) { return std::exponential_distribution<double>(1.0 / mean)(eng_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Derives an independent stream seed from a master seed and a label.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace ammlab
