#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "mono/function.hpp"

namespace mono {

/// Violation witness carried by every Reject: an edge (u,v) with u < v,
/// f(u) = 1, f(v) = 0, re-verifiable with two queries.
struct RejectWitness {
  Edge edge;
  uint64_t step_index = 0;   // 1-based position of the edge on the walk
  uint64_t walk_length = 0;  // ell of the rejecting invocation
};

struct Outcome {
  bool rejected = false;
  std::optional<RejectWitness> witness;
  uint64_t queries_total = 0;
  uint64_t queries_distinct = 0;
  uint64_t runs = 1;  // invocations performed (amplified / edge sampler)
};

/// One invocation of the adaptive walk tester: sample (k, ell = 2^k), sample
/// a uniform start x, walk ell steps to y; if f(x) != f(y), binary-search the
/// path for an influential edge and reject iff it is a violation. With the
/// per-invocation cache, ell = 1 included, distinct queries stay
/// <= 2 + ceil(log2(ell+1)).
Outcome run_once(const BoolFun& f, RngStream& rng);

/// Same with the walk length pinned (the stratified, per-ell form).
Outcome run_once_with_length(const BoolFun& f, uint64_t ell, RngStream& rng);

/// Bisection on a path whose endpoint values differ: maintains lo < hi with
/// f(p_lo) != f(p_hi), mid = floor((lo+hi)/2), and descends into the half
/// whose endpoint values differ, preferring the left half. Returns the
/// canonical edge between an adjacent pair with differing values plus its
/// 1-based position; at most ceil(log2 ell) queries beyond the endpoints.
/// Throws std::invalid_argument when f(p_0) == f(p_ell).
std::pair<Edge, uint64_t> binary_search_influential(QueryMeter& f,
                                                    const WalkPath& path);

/// True iff f(lower) = 1 and f(upper) = 0.
bool is_violation(const BoolFun& f, const Edge& e);

struct AmplifyConfig {
  double epsilon = 0.5;           // proximity parameter in (0,1)
  double influence_bound = 1.0;   // assumed upper bound on I(f)
  double constant_c = 64.0;       // calibration constant for the repetition count
  uint64_t max_repetitions = 1'000'000;
  /// When > 0, use this repetition count directly (still capped). This is how
  /// the pilot-calibration mode feeds a measured rate back in; see
  /// calibrated_repetitions in the harness.
  uint64_t repetitions_override = 0;
};

/// R = ceil(constant_c * influence_bound * log2(max(n,2))^9 / epsilon^4),
/// capped at max_repetitions (or the override, capped likewise).
uint64_t amplified_repetitions(const AmplifyConfig& config, int n);

/// Runs run_once up to R times, rejecting on the first violation witness.
Outcome run_amplified(const BoolFun& f, const AmplifyConfig& config, RngStream& rng);

/// Baseline for the high-influence regime: samples uniform edges and rejects
/// on the first violating one. Two queries per edge.
Outcome edge_sampler(const BoolFun& f, RngStream& rng, uint64_t trials);

struct InfluenceEstimate {
  double value = 0.0;  // n * influential fraction of sampled edges
  double ci_low = 0.0;
  double ci_high = 0.0;  // 95% Wilson, scaled by n
  uint64_t samples = 0;
};

InfluenceEstimate estimate_influence(const BoolFun& f, RngStream& rng, uint64_t samples);

/// The full tester: estimate the influence from edge samples, then dispatch —
/// edge sampling when the estimate clears influence_margin * sqrt(n), the
/// amplified walk tester otherwise.
struct DispatchConfig {
  AmplifyConfig amplify;
  uint64_t influence_samples = 0;  // 0: 64 * n
  double influence_margin = 6.0;
  double edge_trials_factor = 64.0;  // edge trials = ceil(factor * n / estimate)
};

struct DispatchResult {
  Outcome outcome;
  bool used_edge_sampler = false;
  InfluenceEstimate influence;
};

DispatchResult run_dispatch(const BoolFun& f, const DispatchConfig& config,
                            RngStream& rng);

}  // namespace mono
