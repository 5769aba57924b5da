#include "mono/tester.hpp"

#include <cmath>
#include <stdexcept>

#include "mono/hypercube.hpp"
#include "mono/oracles.hpp"

namespace mono {

namespace {

// Per-thread reusable walk buffer and meter; run_once stays pure in
// (f, rng state) and allocation-free for n <= 128.
struct Scratch {
  WalkPath path;
  QueryMeter meter;
};

Outcome run_trial(const BoolFun& f, uint64_t ell, RngStream& rng, Scratch& scr) {
  scr.meter.attach(f);
  scr.path.start = sample_point(rng, f.n);
  int f_start = scr.meter.eval(scr.path.start);

  scr.path.steps.clear();
  scr.path.steps.reserve(ell);
  auto n = static_cast<uint64_t>(f.n);
  for (uint64_t t = 0; t < ell; ++t)
    scr.path.steps.push_back(static_cast<int>(rng.below(n)) + 1);

  Point y = scr.path.start;
  for (int c : scr.path.steps) y.toggle_bit(c);
  int f_end = scr.meter.eval(y);

  Outcome out;
  if (f_start != f_end) {
    auto [edge, t] = binary_search_influential(scr.meter, scr.path);
    int lo = scr.meter.eval(edge.lower);
    int hi = scr.meter.eval(edge.upper());
    if (lo == 1 && hi == 0) {
      out.rejected = true;
      out.witness = RejectWitness{std::move(edge), t, ell};
    }
  }
  out.queries_total = scr.meter.total_queries();
  out.queries_distinct = scr.meter.distinct_queries();
  return out;
}

Scratch& scratch() {
  thread_local Scratch scr;
  return scr;
}

}  // namespace

Outcome run_once(const BoolFun& f, RngStream& rng) {
  WalkLength wl = sample_walk_length(rng, f.n);
  return run_trial(f, wl.ell, rng, scratch());
}

Outcome run_once_with_length(const BoolFun& f, uint64_t ell, RngStream& rng) {
  return run_trial(f, ell, rng, scratch());
}

std::pair<Edge, uint64_t> binary_search_influential(QueryMeter& f,
                                                    const WalkPath& path) {
  size_t lo = 0, hi = path.length();
  Point v_lo = path.start;
  int f_lo = f.eval(v_lo);
  if (f.eval(path.end()) == f_lo)
    throw std::invalid_argument(
        "binary_search_influential: endpoint values are equal");
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    Point v_mid = v_lo;
    for (size_t t = lo; t < mid; ++t) v_mid.toggle_bit(path.steps[t]);
    int f_mid = f.eval(v_mid);
    if (f_mid != f_lo) {
      hi = mid;  // left half endpoints differ; right would also be a dead end
    } else {
      lo = mid;
      v_lo = std::move(v_mid);
    }
  }
  return {canonical_edge(v_lo, path.steps[lo]), lo + 1};
}

bool is_violation(const BoolFun& f, const Edge& e) {
  return f.eval(e.lower) == 1 && f.eval(e.upper()) == 0;
}

uint64_t amplified_repetitions(const AmplifyConfig& config, int n) {
  if (config.repetitions_override > 0)
    return std::min(config.repetitions_override, config.max_repetitions);
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw std::invalid_argument("AmplifyConfig: epsilon must be in (0,1)");
  if (config.influence_bound <= 0.0 || config.constant_c <= 0.0)
    throw std::invalid_argument("AmplifyConfig: bounds must be positive");
  double log_n = std::log2(static_cast<double>(std::max(n, 2)));
  double r = config.constant_c * config.influence_bound * std::pow(log_n, 9) /
             std::pow(config.epsilon, 4);
  if (r >= static_cast<double>(config.max_repetitions))
    return std::max<uint64_t>(config.max_repetitions, 1);
  return std::max<uint64_t>(static_cast<uint64_t>(std::ceil(r)), 1);
}

Outcome run_amplified(const BoolFun& f, const AmplifyConfig& config,
                      RngStream& rng) {
  uint64_t reps = amplified_repetitions(config, f.n);
  Outcome total;
  total.runs = 0;
  for (uint64_t r = 0; r < reps; ++r) {
    Outcome one = run_once(f, rng);
    ++total.runs;
    total.queries_total += one.queries_total;
    total.queries_distinct += one.queries_distinct;
    if (one.rejected) {
      total.rejected = true;
      total.witness = std::move(one.witness);
      break;
    }
  }
  return total;
}

Outcome edge_sampler(const BoolFun& f, RngStream& rng, uint64_t trials) {
  if (trials < 1) throw std::invalid_argument("edge_sampler: trials must be >= 1");
  Outcome total;
  total.runs = 0;
  auto n = static_cast<uint64_t>(f.n);
  for (uint64_t t = 0; t < trials; ++t) {
    Point x = sample_point(rng, f.n);
    int coord = static_cast<int>(rng.below(n)) + 1;
    Edge e = canonical_edge(x, coord);
    ++total.runs;
    total.queries_total += 2;
    total.queries_distinct += 2;
    if (is_violation(f, e)) {
      total.rejected = true;
      total.witness = RejectWitness{std::move(e), 1, 1};
      break;
    }
  }
  return total;
}

InfluenceEstimate estimate_influence(const BoolFun& f, RngStream& rng,
                                     uint64_t samples) {
  EdgeSampleStats stats = sample_edge_stats(f, rng, samples);
  return {stats.influence_estimate, stats.influence_ci.low,
          stats.influence_ci.high, samples};
}

DispatchResult run_dispatch(const BoolFun& f, const DispatchConfig& config,
                            RngStream& rng) {
  DispatchResult result;
  uint64_t samples = config.influence_samples
                         ? config.influence_samples
                         : 64 * static_cast<uint64_t>(f.n);
  result.influence = estimate_influence(f, rng, samples);

  double threshold = config.influence_margin * std::sqrt(static_cast<double>(f.n));
  if (result.influence.value > threshold) {
    result.used_edge_sampler = true;
    double trials = config.edge_trials_factor * static_cast<double>(f.n) /
                    result.influence.value;
    result.outcome = edge_sampler(f, rng,
                                  std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(trials))));
  } else {
    AmplifyConfig amplify = config.amplify;
    if (amplify.influence_bound <= 0.0)
      amplify.influence_bound = std::max(1.0, result.influence.ci_high);
    result.outcome = run_amplified(f, amplify, rng);
  }
  result.outcome.queries_total += 2 * samples;
  result.outcome.queries_distinct += 2 * samples;
  return result;
}

}  // namespace mono
