#include "ammlab/fixtures.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include <cmath>

#include "ammlab/arbitrage.hpp"
#include "ammlab/error.hpp"
#include "ammlab/routing.hpp"

namespace ammlab {

std::vector<std::string> fixture_kinds() { return {"swap", "arb", "route2", "route3", "sync"}; }

json to_json(const SearchSpec& spec) {
  return json{{"objective", to_string(spec.objective)},
              {"lo", spec.lo},
              {"hi", spec.hi},
              {"coarse_step", spec.coarse_step},
              {"refine_passes", spec.refine_passes}};
}

namespace {

json pools_json(const std::vector<PoolState>& pools) {
  json arr = json::array();
  for (const auto& p : pools) arr.push_back(p);
  return arr;
}

json swap_fixture(Rng& rng) {
  PoolState pool{"m0", rng.log_uniform_amount(1e4, 1e18), rng.log_uniform_amount(1e4, 1e18), {}};
  const Direction d = rng.chance(0.5) ? Direction::x_to_y : Direction::y_to_x;
  const Amount in = rng.log_uniform_amount(1, 2.0 * static_cast<double>(to_long_double(pool.reserve_in(d))));
  const SwapAction action{pool.market_id, d, in, Amount{}};
  const Rational exact = rational_swap(pool, action);
  const BigInt floored = boost::multiprecision::numerator(exact) / boost::multiprecision::denominator(exact);
  return json{{"inputs", {{"pool", pool}, {"direction", to_string(d)}, {"amount_in", in}}},
              {"oracle_output", {{"exact", to_string(exact)}, {"floor", floored.str()}}},
              {"spec", to_json(SearchSpec{Amount{0}, Amount{0}, Amount{0}, 0, Objective::route_output})}};
}

json arb_fixture(Rng& rng) {
  auto [p1, p2] = random_profitable_pair(rng);
  const SearchSpec spec{};
  const BruteArbResult r = brute_arb(p1, p2, spec);
  return json{{"inputs", {{"pool1", p1}, {"pool2", p2}}},
              {"oracle_output",
               {{"argmax", r.argmax},
                {"plateau_lo", r.plateau_lo},
                {"plateau_hi", r.plateau_hi},
                {"profit", signed_json(r.profit)},
                {"unimodal", r.unimodal}}},
              {"spec", to_json(spec)}};
}

json route_fixture(Rng& rng, int n) {
  const RouteInstance inst = random_route_instance(rng, n);
  const SearchSpec spec{Amount{0}, Amount{0}, Amount{0}, 64, Objective::route_output};
  const BruteRouteResult r = brute_route(inst.pools, Direction::x_to_y, inst.total_in, spec);
  json split = json::array();
  for (Amount a : r.split) split.push_back(a);
  return json{{"inputs", {{"pools", pools_json(inst.pools)}, {"direction", "x_to_y"}, {"total_in", inst.total_in}}},
              {"oracle_output", {{"split", split}, {"output", r.output}}},
              {"spec", to_json(spec)}};
}

json sync_fixture(Rng& rng) {
  RouteInstance inst = random_route_instance(rng, 2);
  auto& p = inst.pools;
  if (compare_price(p[0], p[1], Direction::x_to_y) < 0) std::swap(p[0], p[1]);
  const Amount t = brute_sync_threshold(p[0], p[1], Direction::x_to_y);
  return json{{"inputs", {{"rich", p[0]}, {"poor", p[1]}, {"direction", "x_to_y"}}},
              {"oracle_output", {{"threshold", t}}},
              {"spec", to_json(SearchSpec{Amount{0}, Amount{0}, Amount{0}, 0, Objective::price_gap})}};
}

}  // namespace

json generate_fixtures(const std::string& kind, int count, std::uint64_t seed, int jobs) {
  const auto kinds = fixture_kinds();
  const auto it = std::find(kinds.begin(), kinds.end(), kind);
  if (it == kinds.end()) fail(Errc::invalid_argument, "unknown fixture kind '" + kind + "'");
  if (count < 0) fail(Errc::invalid_argument, "fixture count must be non-negative");
  const auto code = static_cast<std::uint64_t>(it - kinds.begin());

  std::vector<json> items(static_cast<std::size_t>(count));
  auto make = [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, code, i);
    Rng rng(s);
    json item;
    if (kind == "swap") item = swap_fixture(rng);
    else if (kind == "arb") item = arb_fixture(rng);
    else if (kind == "route2") item = route_fixture(rng, 2);
    else if (kind == "route3") item = route_fixture(rng, 3);
    else item = sync_fixture(rng);
    json ordered{{"inputs", item["inputs"]}, {"oracle_output", item["oracle_output"]}, {"seed", s}, {"spec", item["spec"]}};
    items[i] = std::move(ordered);
  };
  const std::size_t workers = std::clamp<std::size_t>(jobs > 0 ? static_cast<std::size_t>(jobs) : 1, 1,
                                                      std::max<std::size_t>(items.size(), 1));
  std::vector<std::exception_ptr> errors(workers);
  auto lane = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < items.size(); i += workers) make(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(lane, w);
  lane(0);
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  json out = json::array();
  for (auto& item : items) out.push_back(std::move(item));
  return out;
}

namespace {

std::string fixture_kind(const json& inputs) {
  if (inputs.contains("pool")) return "swap";
  if (inputs.contains("pool1")) return "arb";
  if (inputs.contains("rich")) return "sync";
  if (inputs.contains("pools")) return inputs.at("pools").size() == 2 ? "route2" : "route3";
  fail(Errc::parse_error, "unrecognized fixture inputs");
}

double rel(long double got, long double want) {
  if (want == 0) return got == 0 ? 0.0 : 1.0;
  return static_cast<double>(std::fabs(got - want) / std::fabs(want));
}

}  // namespace

FixtureCheck check_fixtures(const json& items, double tolerance) {
  FixtureCheck out;
  if (!items.is_array()) fail(Errc::parse_error, "fixture file must hold a JSON array");
  try {
    for (const auto& item : items) {
      const json& in = item.at("inputs");
      const json& want = item.at("oracle_output");
      const std::string kind = fixture_kind(in);
      if (out.kind.empty()) out.kind = kind;
      else if (out.kind != kind) out.kind = "mixed";
      ++out.count;
      double err = 0;
      bool exact_miss = false;
      if (kind == "swap") {
        const PoolState pool = in.at("pool").get<PoolState>();
        const Amount got = quote(pool, parse_direction(in.at("direction").get<std::string>()),
                                 in.at("amount_in").get<Amount>());
        exact_miss = got.str() != want.at("floor").get<std::string>();
      } else if (kind == "arb") {
        const PoolState p1 = in.at("pool1").get<PoolState>(), p2 = in.at("pool2").get<PoolState>();
        const Amount lo = want.at("plateau_lo").get<Amount>(), hi = want.at("plateau_hi").get<Amount>();
        const Amount argmax = want.at("argmax").get<Amount>();
        const Amount got = optimal_input(p1, p2);
        long double miss = 0;
        if (got < lo) miss = to_long_double(lo) - to_long_double(got);
        if (got > hi) miss = to_long_double(got) - to_long_double(hi);
        err = static_cast<double>(miss / to_long_double(argmax));
        const i128 best = signed_from_json(want.at("profit"));
        err = std::max(err, rel(static_cast<long double>(round_trip_profit(p1, p2, got)), static_cast<long double>(best)));
      } else if (kind == "sync") {
        const Amount got = sync_threshold(in.at("rich").get<PoolState>(), in.at("poor").get<PoolState>(),
                                          parse_direction(in.at("direction").get<std::string>()));
        err = rel(to_long_double(got), to_long_double(want.at("threshold").get<Amount>()));
      } else {
        const auto pools = pools_from_json(in.at("pools"));
        const RoutePlan plan = route(pools, parse_direction(in.at("direction").get<std::string>()),
                                     in.at("total_in").get<Amount>());
        const long double best = to_long_double(want.at("output").get<Amount>());
        const long double got = to_long_double(plan.expected_total_out);
        err = got >= best ? 0.0 : rel(got, best);
      }
      out.max_rel_error = std::max(out.max_rel_error, err);
      if (exact_miss || err > tolerance) {
        ++out.failures;
        out.messages.push_back(kind + " fixture seed " + std::to_string(item.at("seed").get<std::uint64_t>()) +
                               (exact_miss ? ": output differs" : ": relative error " + std::to_string(err)));
      }
    }
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("bad fixture: ") + e.what());
  }
  return out;
}

}  // namespace ammlab
