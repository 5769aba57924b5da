#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mono/oracles.hpp"
#include "mono/tester.hpp"

namespace mono {

/// One Monte Carlo estimation cell. ell is empty for mixed-length runs
/// (the tester draws its own k); stratified runs pin each ell = 2^k in turn.
struct EstimateRow {
  std::string family;
  int n = 0;
  std::optional<uint64_t> ell;
  uint64_t trials = 0;
  uint64_t rejections = 0;
  double rate = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  double mean_queries = 0.0;
  std::optional<double> oracle_bound;  // ell * |F_ell| / (4 n 2^n)
  std::optional<double> exact_rate;    // exhaustive oracle, n <= 4 and ell <= 4
};

struct McOptions {
  bool stratify_by_ell = false;
  int workers = 0;  // 0: hardware concurrency
};

/// Runs run_once with per-trial derived RNG streams; when stratified, fixes
/// each ell = 2^k in turn with trials / (ceil(log2 n)+1) runs each. Output is
/// a pure function of (f, family, trials, seed, options.stratify_by_ell) —
/// independent of the worker count.
std::vector<EstimateRow> mc_estimate(const BoolFun& f, const std::string& family,
                                     uint64_t trials, uint64_t seed,
                                     const McOptions& options = {});

/// Fills oracle_bound (stratified rows, n <= 16) and exact_rate (n <= 4,
/// ell <= 4; mixed rows get the average over k) from the exact oracles.
void fill_oracle_columns(std::vector<EstimateRow>& rows, const TruthTable& f);

extern const char* const kCsvHeader;
std::string csv_line(const EstimateRow& row);
void write_csv(const std::string& path, const std::vector<EstimateRow>& rows);

/// Flat key=value experiment description; round-trips through its file form.
struct ExperimentConfig {
  FamilySpec family;
  std::vector<int> n_values;
  uint64_t trials = 100000;
  uint64_t seed = 0;
  bool stratify_by_ell = false;
  std::string output;
  int workers = 0;

  std::string to_text() const;
  static ExperimentConfig parse_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;
};

/// One EstimateRow per (family, n, ell) cell, oracle columns filled where the
/// dimension permits; writes CSV to config.output when set.
std::vector<EstimateRow> run_sweep(const ExperimentConfig& config);

/// Pilot-calibration mode for the amplified tester: measures the
/// per-invocation rejection rate over pilot_trials mixed-length runs and
/// returns ceil(safety / rate) repetitions. Returns 0 when the pilot saw no
/// rejection (caller falls back to the formula count).
uint64_t calibrated_repetitions(const BoolFun& f, uint64_t seed,
                                uint64_t pilot_trials, double safety = 5.0);

std::string analysis_report_json(const AnalysisReport& report);

}  // namespace mono
