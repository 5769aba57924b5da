#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mono/cli.hpp"
#include "mono/harness.hpp"
#include "mono/oracles.hpp"
#include "mono/tester.hpp"
#include "mono/verify.hpp"

using namespace mono;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/monotest_h_") + name;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"monotest"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("wilson intervals") {
  WilsonInterval zero = wilson_interval(0, 1000);
  CHECK(zero.low == 0.0);
  CHECK(zero.high > 0.0);
  CHECK(zero.high < 0.01);

  WilsonInterval half = wilson_interval(500, 1000);
  CHECK(half.low < 0.5);
  CHECK(half.high > 0.5);
  CHECK(half.high - half.low < 0.07);

  WilsonInterval all = wilson_interval(1000, 1000);
  CHECK(all.high == 1.0);
  CHECK(all.low > 0.99);
}

TEST_CASE("mc_estimate is deterministic and schedule independent") {
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 6);
  McOptions serial{true, 1};
  McOptions pooled{true, 4};
  auto a = mc_estimate(anti, "antidictator:1", 6000, 99, serial);
  auto b = mc_estimate(anti, "antidictator:1", 6000, 99, serial);
  auto c = mc_estimate(anti, "antidictator:1", 6000, 99, pooled);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(csv_line(a[i]) == csv_line(b[i]));
    CHECK(csv_line(a[i]) == csv_line(c[i]));
  }
}

TEST_CASE("stratified row layout") {
  BoolFun anti4 = instantiate(FamilySpec::anti_dictator(1), 4);
  McOptions stratified{true, 0};
  auto rows4 = mc_estimate(anti4, "antidictator:1", 3000, 5, stratified);
  CHECK(rows4.size() == 3);  // k in {0,1,2}
  for (size_t i = 0; i < rows4.size(); ++i) {
    REQUIRE(rows4[i].ell.has_value());
    CHECK(*rows4[i].ell == (uint64_t{1} << i));
    CHECK(rows4[i].trials == 1000);
    CHECK(rows4[i].wilson_low <= rows4[i].rate);
    CHECK(rows4[i].rate <= rows4[i].wilson_high);
  }

  // across n in {4,8,16}: 3 + 4 + 5 rows
  size_t total = 0;
  for (int n : {4, 8, 16}) {
    BoolFun f = instantiate(FamilySpec::anti_dictator(1), n);
    total += mc_estimate(f, "antidictator:1", 600, 5, stratified).size();
  }
  CHECK(total == 12);

  auto mixed = mc_estimate(anti4, "antidictator:1", 3000, 5);
  CHECK(mixed.size() == 1);
  CHECK_FALSE(mixed[0].ell.has_value());
}

TEST_CASE("monotone families never reject") {
  BoolFun maj = instantiate(FamilySpec::majority(), 9);
  for (const EstimateRow& row :
       mc_estimate(maj, "majority", 20000, 3, McOptions{true, 0})) {
    CHECK(row.rejections == 0);
    CHECK(row.rate == 0.0);
    CHECK(row.wilson_low == 0.0);
  }
}

TEST_CASE("oracle columns") {
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 4);
  TruthTable table = to_truth_table(anti);
  auto rows = mc_estimate(anti, "antidictator:1", 60000, 11, McOptions{true, 0});
  fill_oracle_columns(rows, table);
  for (const EstimateRow& row : rows) {
    REQUIRE(row.oracle_bound.has_value());
    REQUIRE(row.exact_rate.has_value());
    // measured rate within 3 sigma of the exact oracle, and above the bound
    double err = binomial_stderr(*row.exact_rate, row.trials);
    CHECK(std::abs(row.rate - *row.exact_rate) <= 3.5 * err + 1e-12);
    CHECK(row.rate + 3.5 * err >= *row.oracle_bound);
  }
  // the n=4 anti-dictator bounds themselves
  StickyTable st(table, 4);
  CHECK(sticky_set(table, st, 1).edges.size() == 8);
  CHECK(sticky_set(table, st, 2).edges.size() == 8);
  CHECK(sticky_set(table, st, 4).edges.size() == 0);

  auto mixed = mc_estimate(anti, "antidictator:1", 1000, 11);
  fill_oracle_columns(mixed, table);
  CHECK_FALSE(mixed[0].oracle_bound.has_value());
  REQUIRE(mixed[0].exact_rate.has_value());
  // mixed exact rate = mean of the stratified exact rates
  double mean = 0;
  for (const EstimateRow& row : rows) mean += *row.exact_rate;
  CHECK(*mixed[0].exact_rate == doctest::Approx(mean / rows.size()));
}

TEST_CASE("csv output") {
  CHECK(std::string(kCsvHeader) ==
        "family,n,ell,trials,rejections,rate,wilson_low,wilson_high,mean_queries,"
        "oracle_bound,exact_rate");
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 5);
  auto rows = mc_estimate(anti, "antidictator:1", 400, 1);
  std::string line = csv_line(rows[0]);
  CHECK(std::count(line.begin(), line.end(), ',') == 10);
  CHECK(line.substr(line.size() - 2) == ",,");  // absent oracle columns are empty
  CHECK(line.find("antidictator:1,5,mixed,400,") == 0);

  std::string path = temp_path("rows.csv");
  write_csv(path, rows);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == kCsvHeader);
  std::string body;
  std::getline(in, body);
  CHECK(body == line);
  std::remove(path.c_str());
}

TEST_CASE("experiment config round trip") {
  ExperimentConfig config;
  config.family = FamilySpec::parse("antidictator:1");
  config.n_values = {4, 8, 16};
  config.trials = 12345;
  config.seed = 99;
  config.stratify_by_ell = true;
  config.output = "out.csv";
  config.workers = 2;

  ExperimentConfig parsed = ExperimentConfig::parse_text(config.to_text());
  CHECK(parsed.to_text() == config.to_text());
  CHECK(parsed.family.name() == "antidictator:1");
  CHECK(parsed.n_values == std::vector<int>{4, 8, 16});
  CHECK(parsed.trials == 12345);
  CHECK(parsed.stratify_by_ell);

  std::string path = temp_path("config.txt");
  config.save(path);
  CHECK(ExperimentConfig::load(path).to_text() == config.to_text());
  std::remove(path.c_str());

  CHECK_THROWS_AS(ExperimentConfig::parse_text("trials=10\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse_text("family=parity\nn_values=4\nbogus=1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse_text("family=parity\nn_values=4\nno equals"),
                  std::invalid_argument);
}

TEST_CASE("run_sweep produces one row per cell with oracle columns") {
  ExperimentConfig config;
  config.family = FamilySpec::parse("antidictator:1");
  config.n_values = {4, 8};
  config.trials = 3000;
  config.seed = 7;
  config.stratify_by_ell = true;
  config.output = temp_path("sweep.csv");
  auto rows = run_sweep(config);
  CHECK(rows.size() == 7);  // 3 cells at n=4, 4 cells at n=8
  for (const EstimateRow& row : rows) CHECK(row.oracle_bound.has_value());
  std::ifstream in(config.output);
  std::stringstream first_run;
  first_run << in.rdbuf();
  int lines = 0;
  for (char ch : first_run.str()) lines += ch == '\n';
  CHECK(lines == 8);

  // (config, seed) determines every output byte
  run_sweep(config);
  std::ifstream again(config.output);
  std::stringstream second_run;
  second_run << again.rdbuf();
  CHECK(first_run.str() == second_run.str());
  std::remove(config.output.c_str());
}

TEST_CASE("calibrated repetitions") {
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 8);
  uint64_t reps = calibrated_repetitions(anti, 3, 4000);
  CHECK(reps >= 5);
  CHECK(reps <= 100);
  BoolFun maj = instantiate(FamilySpec::majority(), 9);
  CHECK(calibrated_repetitions(maj, 3, 2000) == 0);
}

TEST_CASE("a lazy walk mutation is caught by the exactness check") {
  // Tamper with the walk: each step stays put with probability 1/2. The
  // stratified rates then drift far from the exhaustive oracle while
  // one-sidedness still holds, so the oracle-agreement check is the tripwire.
  TruthTable anti = to_truth_table(instantiate(FamilySpec::anti_dictator(1), 4));
  BoolFun f = handle_of(anti);

  auto lazy_run = [&f](uint64_t ell, RngStream& rng) {
    QueryMeter meter(f);
    Point x = sample_point(rng, f.n);
    int fx = meter.eval(x);
    WalkPath path{x, {}};
    Point cur = x;
    for (uint64_t t = 0; t < ell; ++t) {
      int coord = static_cast<int>(rng.below(4)) + 1;
      if (rng.next_bool()) continue;  // lazy self-loop
      path.steps.push_back(coord);
      cur.toggle_bit(coord);
    }
    if (meter.eval(cur) == fx || path.steps.empty()) return false;
    auto [edge, pos] = binary_search_influential(meter, path);
    (void)pos;
    return is_violation(f, edge);
  };

  const uint64_t trials = 40000;
  for (uint64_t ell : {uint64_t{1}, uint64_t{2}}) {
    RngStream honest_base = RngStream::from_seed(5150 + ell);
    RngStream lazy_base = RngStream::from_seed(5150 + ell);
    uint64_t honest = 0, lazy = 0;
    for (uint64_t t = 0; t < trials; ++t) {
      RngStream a = honest_base.substream(t);
      RngStream b = lazy_base.substream(2000000 + t);
      honest += run_once_with_length(f, ell, a).rejected;
      lazy += lazy_run(ell, b);
    }
    double exact = exhaustive_rejection_probability(anti, int(ell)).to_double();
    double err = binomial_stderr(exact, trials);
    CHECK(std::abs(double(honest) / trials - exact) <= 4 * err);
    CHECK(std::abs(double(lazy) / trials - exact) > 10 * err);
  }
}

TEST_CASE("verify meta coverage and quick run") {
  // every required identifier has a registered implementation
  std::vector<std::string> registered = registered_check_ids();
  std::set<std::string> have(registered.begin(), registered.end());
  for (const std::string& id : required_check_ids()) CHECK(have.count(id) == 1);

  std::ostringstream progress;
  VerifyReport report = run_verification(VerifyLevel::Quick, 2026, &progress);
  for (const CheckResult& check : report.checks)
    CHECK_MESSAGE(check.passed, check.id, ": ", check.detail);
  CHECK(report.all_passed);
  CHECK(report.checks.size() == required_check_ids().size());
  CHECK(progress.str().find("[PASS]") != std::string::npos);
}

TEST_CASE("cli end to end") {
  std::string tt = temp_path("anti3.tt");
  CHECK(run_cli({"gen", "--family", "antidictator:1", "--n", "3", "--out", tt}) == 0);

  // analyze reproduces the oracle values: distance 1/2, I = 1, violating = 4
  std::string json_path = temp_path("anti3.json");
  CHECK(run_cli({"analyze", "--in", tt, "--json", json_path}) == 0);
  std::ifstream jf(json_path);
  std::stringstream buf;
  buf << jf.rdbuf();
  std::string json = buf.str();
  CHECK(json.find("\"distance\": 0.5") != std::string::npos);
  CHECK(json.find("\"total_influence\": 1.0") != std::string::npos);
  CHECK(json.find("\"violating_count\": 4") != std::string::npos);

  // tester: monotone file accepts (exit 0)
  std::string mono_tt = temp_path("thr.tt");
  CHECK(run_cli({"gen", "--family", "threshold:3", "--n", "6", "--out", mono_tt}) == 0);
  CHECK(run_cli({"--seed", "9", "test", "--in", mono_tt, "--max-reps", "2000"}) == 0);

  // anti-dictator n=8 rejects (exit 1) with a pilot-calibrated run
  std::string anti8 = temp_path("anti8.tt");
  CHECK(run_cli({"gen", "--family", "antidictator:1", "--n", "8", "--out", anti8}) == 0);
  CHECK(run_cli({"--seed", "9", "test", "--in", anti8, "--epsilon", "0.5",
                 "--pilot", "3000"}) == 1);

  // bench writes the CSV schema
  std::string csv = temp_path("bench.csv");
  CHECK(run_cli({"--seed", "4", "bench", "--family", "antidictator:1", "--n-values",
                 "4", "--trials", "2000", "--stratify", "--out", csv}) == 0);
  std::ifstream cf(csv);
  std::string header;
  std::getline(cf, header);
  CHECK(header == kCsvHeader);

  // usage errors exit 2
  CHECK(run_cli({"bogus"}) == 2);
  CHECK(run_cli({"gen", "--family", "antidictator:1"}) == 2);
  CHECK(run_cli({"analyze", "--in", temp_path("missing.tt")}) == 2);
  CHECK(run_cli({"test", "--family", "nosuch", "--n", "4"}) == 2);

  for (const std::string& p : {tt, json_path, mono_tt, anti8, csv})
    std::remove(p.c_str());
}
