#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ammlab/serialize.hpp"

namespace ammlab {

struct LatencyPoint {
  double percentile = 0;  // 0..100
  double ms = 0;
};

/// Piecewise-linear inverse CDF over percentile points.
class LatencyCdf {
 public:
  explicit LatencyCdf(std::vector<LatencyPoint> points);
  /// Latency in ms at percentile p in [0, 100].
  double quantile(double p) const;
  const std::vector<LatencyPoint>& points() const { return points_; }

 private:
  std::vector<LatencyPoint> points_;
};

struct NetSimConfig {
  std::string chain;
  double block_interval_min = 0;
  double block_size_kb_mean = 0;
  double block_size_kb_std = 0;
  double min_block_kb = 1.0;
  std::vector<LatencyPoint> latency;
  std::vector<double> hashrate;  // fractions of total, top miners only
  double bandwidth_mbps = 0;
  std::uint64_t seed = 1;
  std::uint64_t blocks = 10000;
  int batches = 10;

  /// Throws invalid_argument on inconsistent fields and precondition on a
  /// non-positive bandwidth.
  void validate() const;
};

/// Presets for "eth", "btc", "ltc" and "doge".
NetSimConfig chain_preset(const std::string& chain);
std::vector<std::string> chain_names();

void to_json(json& j, const NetSimConfig& c);
void from_json(const json& j, NetSimConfig& c);
NetSimConfig read_netsim_config(const std::string& path);

struct SimResult {
  double stale_rate = 0;
  double stderr_ = 0;  // batch means
  std::uint64_t blocks = 0;
  std::uint64_t stale = 0;
  std::vector<std::uint64_t> wins;  // blocks produced per miner
};

/// Full-mesh miner network. Blocks arrive as a Poisson process and go to a
/// miner drawn by hashrate; every other miner receives it after the upload of
/// one copy per peer plus a sampled latency and mines on the highest block
/// it has received (first received wins a tie).
SimResult simulate(const NetSimConfig& config);

struct CurvePoint {
  double bandwidth_mbps = 0;
  double stale_rate = 0;
  double stderr_ = 0;
};

/// Quadratic fit of stale rate in percent against bandwidth in Mbit/s:
/// percent = a*b^2 + b_lin*b + c.
struct StaleRateCurve {
  std::vector<CurvePoint> points;
  double a = 0;
  double b = 0;
  double c = 0;
  double eval_percent(double bandwidth) const { return a * bandwidth * bandwidth + b * bandwidth + c; }
};

/// Runs simulate at each bandwidth (same batch seeds at every point) and fits
/// the quadratic. Needs at least three distinct bandwidths.
StaleRateCurve sweep_and_fit(const NetSimConfig& config, const std::vector<double>& bandwidths, int jobs = 1);

/// Fits percent = a*b^2 + b*b + c by least squares.
StaleRateCurve fit_quadratic(std::vector<CurvePoint> points);

/// base - overhead_megabits / interval_s * amplification, floored at
/// min_mbps. Throws saturation when the unfloored result is not positive.
double flooding_degradation(double base_mbps, double overhead_megabits, double interval_s,
                            double amplification, double min_mbps = 0.0);

json to_json(const StaleRateCurve& curve);
std::string curve_csv(const StaleRateCurve& curve);

}  // namespace ammlab
