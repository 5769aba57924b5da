#include "mono/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace mono {

namespace {

struct CellTotals {
  uint64_t rejections = 0;
  uint64_t queries_total = 0;
};

// Worker partition; per-trial streams make the result schedule-independent.
CellTotals run_cell(const BoolFun& f, std::optional<uint64_t> ell, uint64_t trials,
                    const RngStream& cell_stream, int workers) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int t_count = workers > 0 ? workers : std::max(1, hw);
  if (static_cast<uint64_t>(t_count) > trials)
    t_count = static_cast<int>(std::max<uint64_t>(1, trials));

  auto worker = [&](uint64_t begin, uint64_t end, CellTotals& totals) {
    for (uint64_t trial = begin; trial < end; ++trial) {
      RngStream rng = cell_stream.substream(trial);
      Outcome out = ell ? run_once_with_length(f, *ell, rng) : run_once(f, rng);
      if (out.rejected) ++totals.rejections;
      totals.queries_total += out.queries_total;
    }
  };

  if (t_count == 1) {
    CellTotals totals;
    worker(0, trials, totals);
    return totals;
  }

  std::vector<CellTotals> partials(t_count);
  std::vector<std::thread> threads;
  uint64_t chunk = (trials + t_count - 1) / t_count;
  for (int w = 0; w < t_count; ++w) {
    uint64_t begin = chunk * w;
    uint64_t end = std::min(trials, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back(worker, begin, end, std::ref(partials[w]));
  }
  for (auto& t : threads) t.join();
  CellTotals totals;
  for (const CellTotals& p : partials) {
    totals.rejections += p.rejections;
    totals.queries_total += p.queries_total;
  }
  return totals;
}

EstimateRow make_row(const std::string& family, int n, std::optional<uint64_t> ell,
                     uint64_t trials, const CellTotals& totals) {
  EstimateRow row;
  row.family = family;
  row.n = n;
  row.ell = ell;
  row.trials = trials;
  row.rejections = totals.rejections;
  row.rate = trials ? static_cast<double>(totals.rejections) / static_cast<double>(trials) : 0.0;
  WilsonInterval ci = wilson_interval(totals.rejections, trials);
  row.wilson_low = ci.low;
  row.wilson_high = ci.high;
  row.mean_queries =
      trials ? static_cast<double>(totals.queries_total) / static_cast<double>(trials) : 0.0;
  return row;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::vector<EstimateRow> mc_estimate(const BoolFun& f, const std::string& family,
                                     uint64_t trials, uint64_t seed,
                                     const McOptions& options) {
  if (trials < 1) throw std::invalid_argument("mc_estimate: trials must be >= 1");
  RngStream base = RngStream::from_seed(seed);
  std::vector<EstimateRow> rows;
  if (!options.stratify_by_ell) {
    CellTotals totals = run_cell(f, std::nullopt, trials, base.substream(0), options.workers);
    rows.push_back(make_row(family, f.n, std::nullopt, trials, totals));
    return rows;
  }
  int kmax = ceil_log2(static_cast<uint64_t>(f.n));
  uint64_t per_cell = std::max<uint64_t>(1, trials / (static_cast<uint64_t>(kmax) + 1));
  for (int k = 0; k <= kmax; ++k) {
    uint64_t ell = uint64_t{1} << k;
    CellTotals totals =
        run_cell(f, ell, per_cell, base.substream(static_cast<uint64_t>(k) + 1),
                 options.workers);
    rows.push_back(make_row(family, f.n, ell, per_cell, totals));
  }
  return rows;
}

void fill_oracle_columns(std::vector<EstimateRow>& rows, const TruthTable& f) {
  int n = f.n();
  if (n > 16) return;
  int ell_max = 1 << ceil_log2(static_cast<uint64_t>(n));
  StickyTable table(f, ell_max);
  double denom = 4.0 * static_cast<double>(n) * std::ldexp(1.0, n);

  // exact mixed rate = average of the per-ell exact rates over k
  std::optional<double> exact_mixed;
  if (n <= 4) {
    double acc = 0.0;
    int cells = 0;
    for (uint64_t ell = 1; ell <= static_cast<uint64_t>(ell_max); ell <<= 1) {
      acc += exhaustive_rejection_probability(f, static_cast<int>(ell)).to_double();
      ++cells;
    }
    exact_mixed = acc / cells;
  }

  for (EstimateRow& row : rows) {
    if (row.ell) {
      FEllSet fell = sticky_set(f, table, *row.ell);
      row.oracle_bound = static_cast<double>(*row.ell) *
                         static_cast<double>(fell.edges.size()) / denom;
      if (n <= 4 && *row.ell <= 4)
        row.exact_rate =
            exhaustive_rejection_probability(f, static_cast<int>(*row.ell)).to_double();
    } else if (exact_mixed) {
      row.exact_rate = exact_mixed;
    }
  }
}

const char* const kCsvHeader =
    "family,n,ell,trials,rejections,rate,wilson_low,wilson_high,mean_queries,"
    "oracle_bound,exact_rate";

std::string csv_line(const EstimateRow& row) {
  std::ostringstream out;
  out << row.family << ',' << row.n << ',';
  if (row.ell)
    out << *row.ell;
  else
    out << "mixed";
  out << ',' << row.trials << ',' << row.rejections << ',' << format_double(row.rate)
      << ',' << format_double(row.wilson_low) << ',' << format_double(row.wilson_high)
      << ',' << format_double(row.mean_queries) << ',';
  if (row.oracle_bound) out << format_double(*row.oracle_bound);
  out << ',';
  if (row.exact_rate) out << format_double(*row.exact_rate);
  return out.str();
}

void write_csv(const std::string& path, const std::vector<EstimateRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << kCsvHeader << "\n";
  for (const EstimateRow& row : rows) out << csv_line(row) << "\n";
  if (!out) throw std::runtime_error("write_csv: write failed: " + path);
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  out << "family=" << family.name() << "\n";
  out << "n_values=";
  for (size_t i = 0; i < n_values.size(); ++i)
    out << (i ? "," : "") << n_values[i];
  out << "\n";
  out << "trials=" << trials << "\n";
  out << "seed=" << seed << "\n";
  out << "stratify_by_ell=" << (stratify_by_ell ? "true" : "false") << "\n";
  out << "output=" << output << "\n";
  out << "workers=" << workers << "\n";
  return out.str();
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  ExperimentConfig config;
  bool have_family = false, have_n = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("ExperimentConfig: expected key=value: " + line);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (key == "family") {
      config.family = FamilySpec::parse(value);
      have_family = true;
    } else if (key == "n_values") {
      config.n_values.clear();
      std::istringstream vs(value);
      std::string item;
      while (std::getline(vs, item, ','))
        config.n_values.push_back(std::stoi(item));
      have_n = !config.n_values.empty();
    } else if (key == "trials") {
      config.trials = std::stoull(value);
    } else if (key == "seed") {
      config.seed = std::stoull(value);
    } else if (key == "stratify_by_ell") {
      if (value == "true" || value == "1")
        config.stratify_by_ell = true;
      else if (value == "false" || value == "0")
        config.stratify_by_ell = false;
      else
        throw std::invalid_argument("ExperimentConfig: bad boolean: " + value);
    } else if (key == "output") {
      config.output = value;
    } else if (key == "workers") {
      config.workers = std::stoi(value);
    } else {
      throw std::invalid_argument("ExperimentConfig: unknown key: " + key);
    }
  }
  if (!have_family) throw std::invalid_argument("ExperimentConfig: missing family");
  if (!have_n) throw std::invalid_argument("ExperimentConfig: missing n_values");
  if (config.trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("ExperimentConfig: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("ExperimentConfig: cannot open " + path);
  out << to_text();
}

std::vector<EstimateRow> run_sweep(const ExperimentConfig& config) {
  std::vector<EstimateRow> rows;
  for (int n : config.n_values) {
    BoolFun f = instantiate(config.family, n);
    McOptions options;
    options.stratify_by_ell = config.stratify_by_ell;
    options.workers = config.workers;
    uint64_t cell_seed = RngStream::mix(config.seed ^ (0x9E3779B97F4A7C15ULL *
                                                       static_cast<uint64_t>(n)));
    auto batch = mc_estimate(f, config.family.name(), config.trials, cell_seed, options);
    if (n <= 16) {
      TruthTable table = to_truth_table(f);
      fill_oracle_columns(batch, table);
    }
    rows.insert(rows.end(), batch.begin(), batch.end());
  }
  if (!config.output.empty()) write_csv(config.output, rows);
  return rows;
}

uint64_t calibrated_repetitions(const BoolFun& f, uint64_t seed,
                                uint64_t pilot_trials, double safety) {
  auto rows = mc_estimate(f, "pilot", pilot_trials, seed);
  if (rows[0].rejections == 0) return 0;
  return static_cast<uint64_t>(std::ceil(safety / rows[0].rate));
}

std::string analysis_report_json(const AnalysisReport& report) {
  nlohmann::json j;
  j["family"] = report.family;
  j["n"] = report.n;
  j["influential_count"] = report.influential_count;
  j["violating_count"] = report.violating_count;
  j["total_influence"] = report.total_influence.to_double();
  j["total_influence_exact"] = report.total_influence.str();
  if (report.distance) {
    j["distance"] = report.distance->to_double();
    j["distance_exact"] = report.distance->str();
  }
  if (!report.f_ell_sizes.empty()) {
    nlohmann::json f_ell = nlohmann::json::object();
    for (const auto& [ell, size] : report.f_ell_sizes)
      f_ell[std::to_string(ell)] = size;
    j["f_ell"] = f_ell;
  }
  return j.dump(2);
}

}  // namespace mono
