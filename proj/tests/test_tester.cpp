#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mono/harness.hpp"
#include "mono/oracles.hpp"
#include "mono/tester.hpp"

using namespace mono;

namespace {

TruthTable path_table(int n, const std::vector<uint64_t>& indices,
                      const std::vector<int>& values) {
  TruthTable t(n);
  for (size_t i = 0; i < indices.size(); ++i) t.set(indices[i], values[i]);
  return t;
}

}  // namespace

TEST_CASE("binary search follows the deterministic bisection traces") {
  // path 000 -> 100 -> 110 -> 111 with values (0,0,1,1): lands on t=2
  {
    TruthTable t = path_table(3, {0, 1, 3, 7}, {0, 0, 1, 1});
    BoolFun f = handle_of(t);
    QueryMeter meter(f);
    WalkPath path{Point::from_index(3, 0), {1, 2, 3}};
    auto [edge, pos] = binary_search_influential(meter, path);
    CHECK(pos == 2);
    CHECK(edge == path.edge_at(2));
    CHECK(meter.distinct_queries() <= 4);  // 2 endpoints + ceil(log2 3) mids
  }
  // values (1,0): single edge, t=1
  {
    TruthTable t = path_table(2, {0, 1}, {1, 0});
    BoolFun f = handle_of(t);
    QueryMeter meter(f);
    WalkPath path{Point::from_index(2, 0), {1}};
    auto [edge, pos] = binary_search_influential(meter, path);
    CHECK(pos == 1);
    CHECK(edge == path.edge_at(1));
    CHECK(meter.distinct_queries() == 2);
  }
  // values (0,1,0,1): mid has f(p1) != f(p0), so prefer the left half; t=1
  {
    TruthTable t = path_table(3, {0, 1, 3, 7}, {0, 1, 0, 1});
    BoolFun f = handle_of(t);
    QueryMeter meter(f);
    WalkPath path{Point::from_index(3, 0), {1, 2, 3}};
    auto [edge, pos] = binary_search_influential(meter, path);
    CHECK(pos == 1);
    CHECK(edge == path.edge_at(1));
  }
  // equal endpoint values violate the precondition
  {
    TruthTable t = path_table(2, {0, 1, 3}, {0, 1, 0});
    BoolFun f = handle_of(t);
    QueryMeter meter(f);
    WalkPath path{Point::from_index(2, 0), {1, 2}};
    CHECK_THROWS_AS(binary_search_influential(meter, path), std::invalid_argument);
  }
}

TEST_CASE("binary search returns an influential adjacent pair (property)") {
  RngStream rng = RngStream::from_seed(2024);
  int exercised = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    int n = 2 + static_cast<int>(rng.below(8));
    TruthTable t(n);
    for (uint64_t idx = 0; idx < t.size(); ++idx) t.set(idx, rng.next_bool());
    BoolFun f = handle_of(t);
    uint64_t ell = 1 + rng.below(10);
    WalkPath path = random_walk(rng, sample_point(rng, n), ell);
    if (f.eval(path.start) == f.eval(path.end())) continue;
    ++exercised;
    QueryMeter meter(f);
    auto [edge, pos] = binary_search_influential(meter, path);
    CHECK(pos >= 1);
    CHECK(pos <= ell);
    CHECK(edge == path.edge_at(pos));
    CHECK(f.eval(edge.lower) != f.eval(edge.upper()));
    CHECK(meter.distinct_queries() <= 2 + uint64_t(ceil_log2(ell + 1)));
  }
  CHECK(exercised > 300);
}

TEST_CASE("is_violation") {
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 3);
  CHECK(is_violation(anti, Edge{Point::from_index(3, 2), 1}));
  BoolFun dict = instantiate(FamilySpec::dictator(1), 3);
  for (uint64_t idx : {0, 2, 4, 6})
    CHECK_FALSE(is_violation(dict, Edge{Point::from_index(3, idx), 1}));
  // parity n=2: edge (01, 11) has f(01)=1, f(11)=0
  BoolFun parity = instantiate(FamilySpec::parity(), 2);
  CHECK(is_violation(parity, Edge{Point::from_index(2, 2), 1}));
}

TEST_CASE("run_once accepts monotone functions") {
  RngStream rng = RngStream::from_seed(55);
  for (const BoolFun& f :
       {instantiate(FamilySpec::dictator(1), 8),
        instantiate(FamilySpec::majority(), 9),
        instantiate(FamilySpec::threshold_at(3), 8),
        instantiate(FamilySpec::random_monotone(4, 4), 8)}) {
    for (int rep = 0; rep < 5000; ++rep) CHECK_FALSE(run_once(f, rng).rejected);
  }
}

TEST_CASE("run_once at n=1 always finds the anti-dictator violation") {
  // the walk length is pinned to 1, and the single edge always violates
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 1);
  RngStream rng = RngStream::from_seed(13);
  for (int rep = 0; rep < 200; ++rep) {
    Outcome out = run_once(anti, rng);
    CHECK(out.rejected);
    CHECK(out.witness->walk_length == 1);
    CHECK(out.queries_distinct == 2);
  }
}

TEST_CASE("run_once hits the exact rejection rate on anti-dictator n=2") {
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 2);
  RngStream base = RngStream::from_seed(77);
  const uint64_t trials = 200000;
  uint64_t rejections = 0;
  for (uint64_t trial = 0; trial < trials; ++trial) {
    RngStream rng = base.substream(trial);
    Outcome out = run_once(anti, rng);
    if (out.rejected) {
      ++rejections;
      REQUIRE(out.witness.has_value());
      CHECK(is_violation(anti, out.witness->edge));
    }
  }
  double rate = double(rejections) / double(trials);
  CHECK(std::abs(rate - 0.5) < 3.5 * binomial_stderr(0.5, trials));
}

TEST_CASE("run_once conditioned on ell=1 matches parity's edge census") {
  BoolFun parity = instantiate(FamilySpec::parity(), 2);
  RngStream base = RngStream::from_seed(78);
  const uint64_t trials = 200000;
  uint64_t rejections = 0;
  for (uint64_t trial = 0; trial < trials; ++trial) {
    RngStream rng = base.substream(trial);
    if (run_once_with_length(parity, 1, rng).rejected) ++rejections;
  }
  double rate = double(rejections) / double(trials);
  CHECK(std::abs(rate - 0.5) < 3.5 * binomial_stderr(0.5, trials));
}

TEST_CASE("query accounting stays within the adaptive budget") {
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 16);
  RngStream rng = RngStream::from_seed(99);
  for (uint64_t ell : {uint64_t{1}, uint64_t{2}, uint64_t{4}, uint64_t{16}}) {
    uint64_t bound = 2 + ceil_log2(ell + 1);
    for (int rep = 0; rep < 5000; ++rep) {
      Outcome out = run_once_with_length(anti, ell, rng);
      CHECK(out.queries_distinct <= bound);
      CHECK(out.queries_total >= out.queries_distinct);
    }
  }
  BoolFun noisy = instantiate(FamilySpec::bernoulli(0.5, 5), 64);
  uint64_t mixed_bound = 2 + ceil_log2(64) + 1;
  for (int rep = 0; rep < 5000; ++rep)
    CHECK(run_once(noisy, rng).queries_distinct <= mixed_bound);
}

TEST_CASE("amplified repetition count") {
  AmplifyConfig config;
  config.epsilon = 0.5;
  config.influence_bound = 1.0;
  config.constant_c = 64.0;
  config.max_repetitions = 1000000;
  // 64 * 3^9 * 16 = 20155392 exceeds the cap
  CHECK(amplified_repetitions(config, 8) == 1000000);
  config.max_repetitions = 1u << 30;
  CHECK(amplified_repetitions(config, 8) == 20155392);
  config.repetitions_override = 40;
  CHECK(amplified_repetitions(config, 8) == 40);
  config.repetitions_override = 0;
  config.epsilon = 1.5;
  CHECK_THROWS_AS(amplified_repetitions(config, 8), std::invalid_argument);
}

TEST_CASE("run_amplified") {
  RngStream rng = RngStream::from_seed(31);
  BoolFun maj = instantiate(FamilySpec::majority(), 9);
  AmplifyConfig config;
  config.repetitions_override = 500;
  Outcome accept = run_amplified(maj, config, rng);
  CHECK_FALSE(accept.rejected);
  CHECK(accept.runs == 500);

  // pilot-calibrated repetitions reject anti-dictator almost surely
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 8);
  uint64_t reps = calibrated_repetitions(anti, 123, 5000);
  CHECK(reps >= 5);
  CHECK(reps <= 200);
  AmplifyConfig calibrated;
  calibrated.repetitions_override = reps;
  int rejected = 0;
  RngStream base = RngStream::from_seed(32);
  const int runs = 200;
  for (int r = 0; r < runs; ++r) {
    RngStream stream = base.substream(r);
    Outcome out = run_amplified(anti, calibrated, stream);
    if (out.rejected) {
      ++rejected;
      CHECK(is_violation(anti, out.witness->edge));
      CHECK(out.runs <= reps);
    }
    CHECK(out.queries_distinct <= out.runs * (2 + uint64_t(ceil_log2(8)) + 1));
  }
  CHECK(rejected >= 198);  // >= 0.99 expected
}

TEST_CASE("edge sampler") {
  RngStream rng = RngStream::from_seed(41);
  BoolFun maj = instantiate(FamilySpec::majority(), 9);
  Outcome accept = edge_sampler(maj, rng, 200);
  CHECK_FALSE(accept.rejected);
  CHECK(accept.queries_total == 400);

  BoolFun parity16 = instantiate(FamilySpec::parity(), 16);
  Outcome reject = edge_sampler(parity16, rng, 64);
  CHECK(reject.rejected);
  CHECK(is_violation(parity16, reject.witness->edge));

  // single-trial rejection frequency 1/2 on parity n=8
  BoolFun parity8 = instantiate(FamilySpec::parity(), 8);
  RngStream base = RngStream::from_seed(42);
  const uint64_t trials = 100000;
  uint64_t rejections = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    RngStream stream = base.substream(t);
    if (edge_sampler(parity8, stream, 1).rejected) ++rejections;
  }
  CHECK(std::abs(double(rejections) / double(trials) - 0.5) < 0.01);
}

TEST_CASE("influence estimation") {
  RngStream rng = RngStream::from_seed(61);
  BoolFun constant = instantiate(FamilySpec::threshold_at(0), 12);
  CHECK(estimate_influence(constant, rng, 2000).value == 0.0);

  BoolFun parity = instantiate(FamilySpec::parity(), 10);
  InfluenceEstimate pe = estimate_influence(parity, rng, 100000);
  CHECK(pe.value == 10.0);  // every edge influential

  BoolFun dict = instantiate(FamilySpec::dictator(1), 10);
  InfluenceEstimate de = estimate_influence(dict, rng, 100000);
  CHECK(std::abs(de.value - 1.0) < 0.1);
  CHECK(de.ci_low <= de.value);
  CHECK(de.ci_high >= de.value);
}

TEST_CASE("regime dispatch") {
  RngStream rng = RngStream::from_seed(71);
  // parity n=64: influence 64 > 6 sqrt(64) = 48, so the edge sampler runs
  BoolFun parity = instantiate(FamilySpec::parity(), 64);
  DispatchConfig config;
  DispatchResult high = run_dispatch(parity, config, rng);
  CHECK(high.used_edge_sampler);
  CHECK(high.outcome.rejected);

  // anti-dictator n=8: influence 1, walk tester route
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 8);
  DispatchConfig walk_config;
  walk_config.amplify.repetitions_override = 200;
  DispatchResult low = run_dispatch(anti, walk_config, rng);
  CHECK_FALSE(low.used_edge_sampler);
  CHECK(low.outcome.rejected);

  BoolFun maj = instantiate(FamilySpec::majority(), 9);
  DispatchConfig accept_config;
  accept_config.amplify.repetitions_override = 300;
  DispatchResult accept = run_dispatch(maj, accept_config, rng);
  CHECK_FALSE(accept.outcome.rejected);
}
