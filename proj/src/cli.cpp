#include "mono/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mono/harness.hpp"
#include "mono/oracles.hpp"
#include "mono/tester.hpp"
#include "mono/verify.hpp"

namespace mono {

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 3;

struct LoadedFunction {
  BoolFun fn;
  std::string label;
  std::shared_ptr<const TruthTable> table;  // set when dense
};

LoadedFunction resolve_function(const std::string& in_path,
                                const std::string& family, int n) {
  if (!in_path.empty()) {
    auto table = std::make_shared<const TruthTable>(load_truth_table(in_path));
    return {handle_of(table), in_path, table};
  }
  if (family.empty())
    throw CLI::ValidationError("provide either --in or --family with --n");
  if (n < 1) throw CLI::ValidationError("--n is required with --family");
  FamilySpec spec = FamilySpec::parse(family);
  return {instantiate(spec, n), spec.name(), nullptr};
}

std::string describe_edge(const Edge& e) {
  std::string bits;
  for (int i = 1; i <= e.lower.dimension(); ++i)
    bits += e.lower.bit(i) ? '1' : '0';
  return "lower=" + bits + " coord=" + std::to_string(e.coord);
}

int cmd_gen(const std::string& family, int n, const std::string& out) {
  FamilySpec spec = FamilySpec::parse(family);
  TruthTable table = to_truth_table(instantiate(spec, n));
  save_truth_table(table, out);
  std::cout << "wrote " << out << " (" << spec.name() << ", n=" << n << ")\n";
  return kExitAccept;
}

int cmd_analyze(const std::string& in_path, const std::string& json_path) {
  TruthTable table = load_truth_table(in_path);
  AnalysisReport report = analyze_table(table, in_path);
  std::string json = analysis_report_json(report);
  std::cout << json << "\n";
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + json_path);
    out << json << "\n";
  }
  return kExitAccept;
}

int cmd_test(const LoadedFunction& loaded, double epsilon, double influence_bound,
             double constant_c, uint64_t max_reps, uint64_t pilot, uint64_t seed,
             const std::string& mode) {
  AmplifyConfig config;
  config.epsilon = epsilon;
  config.constant_c = constant_c;
  config.max_repetitions = max_reps;
  if (influence_bound > 0) {
    config.influence_bound = influence_bound;
  } else if (loaded.table) {
    config.influence_bound =
        influence_report(*loaded.table).total_influence.to_double();
    if (config.influence_bound <= 0) config.influence_bound = 1.0;
  } else {
    config.influence_bound = 1.0;
  }
  if (pilot > 0) {
    uint64_t calibrated = calibrated_repetitions(loaded.fn, seed ^ 0x9112, pilot);
    if (calibrated > 0) config.repetitions_override = calibrated;
  }

  RngStream rng = RngStream::from_seed(seed);
  Outcome outcome;
  bool used_edges = false;
  if (mode == "walk") {
    outcome = run_amplified(loaded.fn, config, rng);
  } else if (mode == "edges") {
    outcome = edge_sampler(loaded.fn, rng, std::max<uint64_t>(1, max_reps));
    used_edges = true;
  } else {
    DispatchConfig dispatch;
    dispatch.amplify = config;
    DispatchResult result = run_dispatch(loaded.fn, dispatch, rng);
    outcome = result.outcome;
    used_edges = result.used_edge_sampler;
    std::cout << "influence estimate: " << result.influence.value << " [95% "
              << result.influence.ci_low << ", " << result.influence.ci_high
              << "]\n";
  }

  std::cout << "function: " << loaded.label << " (n=" << loaded.fn.n << ")\n";
  std::cout << "route: " << (used_edges ? "edge-sampler" : "adaptive-walk")
            << ", runs: " << outcome.runs
            << ", queries: " << outcome.queries_total << "\n";
  if (outcome.rejected) {
    std::cout << "verdict: REJECT (witness " << describe_edge(outcome.witness->edge);
    if (!used_edges)
      std::cout << ", walk length " << outcome.witness->walk_length << ", step "
                << outcome.witness->step_index;
    std::cout << ")\n";
    return kExitReject;
  }
  std::cout << "verdict: ACCEPT\n";
  return kExitAccept;
}

int cmd_bench(ExperimentConfig config) {
  std::vector<EstimateRow> rows = run_sweep(config);
  std::cout << kCsvHeader << "\n";
  for (const EstimateRow& row : rows) std::cout << csv_line(row) << "\n";
  if (!config.output.empty())
    std::cerr << "wrote " << rows.size() << " rows to " << config.output << "\n";
  return kExitAccept;
}

int cmd_verify(const std::string& level_name, uint64_t seed,
               const std::string& json_path) {
  VerifyLevel level =
      level_name == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
  VerifyReport report = run_verification(level, seed, &std::cout);
  if (!json_path.empty()) {
    nlohmann::json j;
    j["level"] = level_name;
    j["seed"] = seed;
    j["all_passed"] = report.all_passed;
    j["checks"] = nlohmann::json::array();
    for (const CheckResult& r : report.checks)
      j["checks"].push_back({{"id", r.id},
                             {"passed", r.passed},
                             {"detail", r.detail},
                             {"millis", r.millis}});
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + json_path);
    out << j.dump(2) << "\n";
  }
  std::cout << (report.all_passed ? "verification passed" : "verification FAILED")
            << "\n";
  return report.all_passed ? kExitAccept : kExitVerifyFailed;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"adaptive monotonicity testing laboratory"};
  app.require_subcommand(1);

  uint64_t seed = 12345;
  app.add_option("--seed", seed, "64-bit unsigned master seed")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "emit a truth-table file from a family spec");
  std::string gen_family, gen_out;
  int gen_n = 0;
  gen->add_option("--family", gen_family, "family spec, e.g. antidictator:1")->required();
  gen->add_option("--n", gen_n, "dimension")->required();
  gen->add_option("--out", gen_out, "output path")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "oracle report for a truth-table file");
  std::string analyze_in, analyze_json;
  analyze->add_option("--in", analyze_in, "truth-table file")->required();
  analyze->add_option("--json", analyze_json, "also write the report here");

  // test
  auto* test = app.add_subcommand("test", "run the tester; exit 1 on reject");
  std::string test_in, test_family, test_mode = "walk";
  int test_n = 0;
  double test_epsilon = 0.5, test_influence = 0.0, test_c = 64.0;
  uint64_t test_max_reps = 1'000'000, test_pilot = 0;
  test->add_option("--in", test_in, "truth-table file");
  test->add_option("--family", test_family, "family spec (alternative to --in)");
  test->add_option("--n", test_n, "dimension for --family");
  test->add_option("--epsilon", test_epsilon, "proximity parameter")->capture_default_str();
  test->add_option("--influence-bound", test_influence,
                   "assumed bound on I(f); 0 = exact I from the table when available");
  test->add_option("--constant-c", test_c, "repetition-count constant")->capture_default_str();
  test->add_option("--max-reps", test_max_reps, "repetition cap")->capture_default_str();
  test->add_option("--pilot", test_pilot,
                   "pilot trials for empirical repetition calibration (0 = formula)");
  test->add_option("--mode", test_mode, "auto | walk | edges")
      ->check(CLI::IsMember({"auto", "walk", "edges"}))
      ->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Monte Carlo sweep, CSV output");
  std::string bench_config, bench_family, bench_out;
  std::vector<int> bench_n;
  uint64_t bench_trials = 100'000;
  bool bench_stratify = false;
  int bench_workers = 0;
  bench->add_option("--config", bench_config, "key=value experiment file");
  bench->add_option("--family", bench_family, "family spec");
  bench->add_option("--n-values", bench_n, "dimensions to sweep");
  bench->add_option("--trials", bench_trials, "trials per (family, n)")->capture_default_str();
  bench->add_flag("--stratify", bench_stratify, "fix each ell = 2^k in turn");
  bench->add_option("--out", bench_out, "CSV output path");
  bench->add_option("--workers", bench_workers, "worker threads (0 = auto)");

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  std::string verify_level = "quick", verify_json;
  verify->add_option("--level", verify_level, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  verify->add_option("--json", verify_json, "machine-readable report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kExitAccept;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_family, gen_n, gen_out);
    if (analyze->parsed()) return cmd_analyze(analyze_in, analyze_json);
    if (test->parsed()) {
      LoadedFunction loaded = resolve_function(test_in, test_family, test_n);
      return cmd_test(loaded, test_epsilon, test_influence, test_c, test_max_reps,
                      test_pilot, seed, test_mode);
    }
    if (bench->parsed()) {
      ExperimentConfig config;
      if (!bench_config.empty()) {
        config = ExperimentConfig::load(bench_config);
        if (app.count("--seed")) config.seed = seed;
      } else {
        if (bench_family.empty() || bench_n.empty())
          throw CLI::ValidationError("bench needs --config or --family and --n-values");
        config.family = FamilySpec::parse(bench_family);
        config.n_values = bench_n;
        config.trials = bench_trials;
        config.stratify_by_ell = bench_stratify;
        config.output = bench_out;
        config.workers = bench_workers;
        config.seed = seed;
      }
      return cmd_bench(std::move(config));
    }
    if (verify->parsed()) return cmd_verify(verify_level, seed, verify_json);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mono
