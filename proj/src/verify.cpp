#include "mono/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "mono/harness.hpp"
#include "mono/oracles.hpp"
#include "mono/tester.hpp"

namespace mono {

namespace {

struct Context {
  VerifyLevel level = VerifyLevel::Quick;
  uint64_t seed = 0;

  bool full() const { return level == VerifyLevel::Full; }
  uint64_t mc_trials() const { return full() ? 1'000'000 : 100'000; }
  int pick(int quick, int full_size) const { return full() ? full_size : quick; }
};

// Accumulates sub-assertions; keeps the first failure message.
struct Collector {
  bool ok = true;
  uint64_t assertions = 0;
  std::string failure;

  void expect(bool cond, const std::string& msg) {
    ++assertions;
    if (!cond && ok) {
      ok = false;
      failure = msg;
    }
  }

  CheckResult result(const std::string& id) const {
    CheckResult r;
    r.id = id;
    r.passed = ok;
    r.detail = ok ? std::to_string(assertions) + " assertions" : failure;
    return r;
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

struct CorpusItem {
  FamilySpec spec;
  int n;
};

// Deterministic mix of seeded families spanning the interesting regimes.
std::vector<CorpusItem> random_corpus(int count, int n_min, int n_max,
                                      uint64_t seed) {
  static const double probs[] = {0.15, 0.3, 0.5, 0.7, 0.85};
  std::vector<CorpusItem> items;
  items.reserve(count);
  for (int i = 0; i < count; ++i) {
    int n = n_min + i % (n_max - n_min + 1);
    uint64_t s = RngStream::mix(seed + 0x100000001B3ULL * i);
    switch (i % 4) {
      case 0:
      case 1:
        items.push_back({FamilySpec::bernoulli(probs[i % 5], s), n});
        break;
      case 2:
        items.push_back({FamilySpec::blended(FamilySpec::threshold_at((n + 1) / 2),
                                             1, 0x6, s),
                         n});
        break;
      default:
        items.push_back({FamilySpec::random_monotone(s, 3 + i % 4), n});
        break;
    }
  }
  return items;
}

TruthTable table_of(const CorpusItem& item) {
  return to_truth_table(instantiate(item.spec, item.n));
}

TruthTable table_from_mask(int n, uint64_t mask) {
  TruthTable t(n);
  for (uint64_t idx = 0; idx < t.size(); ++idx) t.set(idx, (mask >> idx) & 1);
  return t;
}

int64_t hamming(const TruthTable& a, const TruthTable& b) {
  int64_t d = 0;
  for (uint64_t idx = 0; idx < a.size(); ++idx) d += a.at(idx) != b.at(idx);
  return d;
}

// ---------------------------------------------------------------------------
// hypercube checks

CheckResult check_edge_canonicalization(const Context& ctx) {
  Collector c;
  for (int n = 1; n <= 3; ++n) {
    for (uint64_t idx = 0; idx < (uint64_t{1} << n); ++idx) {
      Point x = Point::from_index(n, idx);
      for (int i = 1; i <= n; ++i) {
        Edge a = canonical_edge(x, i);
        Edge b = canonical_edge(flip(x, i), i);
        c.expect(a == b, "canonical edge differs across traversal direction");
        c.expect(!a.lower.bit(i), "canonical lower endpoint has bit set");
        c.expect(precedes(a.lower, a.upper()), "lower does not precede upper");
      }
    }
  }
  {
    WalkPath path{Point::from_index(2, 1), {1}};  // start 10, one step down
    Edge e = path.edge_at(1);
    c.expect(e.lower.index() == 0 && e.coord == 1,
             "descending step not canonicalized to (00, coord 1)");
    bool threw = false;
    try {
      path.edge_at(2);
    } catch (const std::out_of_range&) {
      threw = true;
    }
    c.expect(threw, "edge_at past the walk end did not throw");
  }
  RngStream rng = RngStream::from_seed(ctx.seed ^ 0xE1);
  for (int rep = 0; rep < ctx.pick(200, 2000); ++rep) {
    Point start = sample_point(rng, 6);
    WalkPath path = random_walk(rng, start, 8);
    for (size_t t = 1; t <= path.length(); ++t) {
      Edge e = path.edge_at(t);
      Point a = path.vertex_at(t - 1), b = path.vertex_at(t);
      c.expect((e.lower == a && e.upper() == b) || (e.lower == b && e.upper() == a),
               "edge_at does not connect consecutive vertices");
    }
  }
  return c.result("hypercube.edge-canonicalization");
}

CheckResult check_stationarity(const Context& ctx) {
  Collector c;
  for (int n : {2, 4}) {
    const int ell = 3;
    uint64_t trials = ctx.mc_trials();
    std::vector<std::vector<uint64_t>> counts(ell + 1,
                                              std::vector<uint64_t>(uint64_t{1} << n, 0));
    RngStream base = RngStream::from_seed(ctx.seed ^ (0x57A7 + n));
    for (uint64_t trial = 0; trial < trials; ++trial) {
      RngStream rng = base.substream(trial);
      Point x = sample_point(rng, n);
      WalkPath path = random_walk(rng, x, ell);
      Point cur = path.start;
      for (int t = 1; t <= ell; ++t) {
        cur.toggle_bit(path.steps[t - 1]);
        ++counts[t][cur.index()];
      }
    }
    double cells = std::ldexp(1.0, n);
    double expected = static_cast<double>(trials) / cells;
    // mean dof, threshold approx dof + 8*sqrt(2 dof): far past any plausible noise
    double threshold = (cells - 1) + 8.0 * std::sqrt(2.0 * (cells - 1));
    for (int t = 1; t <= ell; ++t) {
      double chi2 = 0.0;
      for (uint64_t v = 0; v < (uint64_t{1} << n); ++v) {
        double d = static_cast<double>(counts[t][v]) - expected;
        chi2 += d * d / expected;
      }
      c.expect(chi2 < threshold, "walk marginal chi-squared too large: n=" +
                                     std::to_string(n) + " t=" + std::to_string(t) +
                                     " chi2=" + fmt(chi2));
    }
  }
  return c.result("hypercube.stationarity");
}

CheckResult check_uniform_edge_marginal(const Context&) {
  Collector c;
  for (int n : {2, 3}) {
    for (int ell : {1, 2, 3}) {
      uint64_t seq_count = 1;
      for (int t = 0; t < ell; ++t) seq_count *= n;
      // counts[t][lower][coord]
      std::map<std::tuple<int, uint64_t, int>, uint64_t> counts;
      std::vector<int> step(ell, 0);
      for (uint64_t seq = 0; seq < seq_count; ++seq) {
        for (uint64_t x = 0; x < (uint64_t{1} << n); ++x) {
          uint64_t cur = x;
          for (int t = 1; t <= ell; ++t) {
            uint64_t next = cur ^ (uint64_t{1} << step[t - 1]);
            ++counts[{t, std::min(cur, next), step[t - 1] + 1}];
            cur = next;
          }
        }
        for (int t = 0; t < ell; ++t) {
          if (++step[t] < n) break;
          step[t] = 0;
        }
      }
      uint64_t expected = 2;  // 2 * n^(ell-1)
      for (int t = 1; t < ell; ++t) expected *= n;
      uint64_t edges = static_cast<uint64_t>(n) << (n - 1);
      c.expect(counts.size() == edges * static_cast<uint64_t>(ell),
               "missing (edge, t) cells in exact enumeration");
      for (const auto& [key, count] : counts)
        c.expect(count == expected,
                 "edge marginal not uniform at n=" + std::to_string(n) +
                     " ell=" + std::to_string(ell));
    }
  }
  return c.result("hypercube.uniform-edge-marginal");
}

CheckResult check_reproducibility(const Context& ctx) {
  Collector c;
  RngStream a = RngStream::from_seed(ctx.seed ^ 0x5EED);
  RngStream b = RngStream::from_seed(ctx.seed ^ 0x5EED);
  for (int rep = 0; rep < 64; ++rep) {
    WalkLength la = sample_walk_length(a, 11), lb = sample_walk_length(b, 11);
    c.expect(la.k == lb.k && la.ell == lb.ell, "walk length draw diverged");
    Point xa = sample_point(a, 70), xb = sample_point(b, 70);
    c.expect(xa == xb, "point draw diverged");
    WalkPath pa = random_walk(a, xa, la.ell), pb = random_walk(b, xb, lb.ell);
    c.expect(pa.steps == pb.steps, "walk steps diverged");
  }
  RngStream s0 = RngStream::from_seed(ctx.seed).substream(0);
  RngStream s1 = RngStream::from_seed(ctx.seed).substream(1);
  bool differs = false;
  for (int rep = 0; rep < 8; ++rep) differs |= s0.next_u64() != s1.next_u64();
  c.expect(differs, "substreams 0 and 1 produced identical output");
  return c.result("hypercube.reproducibility");
}

// ---------------------------------------------------------------------------
// function-model checks

CheckResult check_meter_conservation(const Context& ctx) {
  Collector c;
  auto forwarded = std::make_shared<uint64_t>(0);
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 6);
  BoolFun counted{6, [forwarded, anti](const Point& x) {
                    ++*forwarded;
                    return anti.eval(x);
                  }};
  {
    QueryMeter meter(counted);
    Point p = Point::from_index(6, 5);
    meter.eval(p);
    meter.eval(p);
    meter.eval(Point::from_index(6, 9));
    c.expect(meter.total_queries() == 3, "total_queries must count every request");
    c.expect(meter.distinct_queries() == 2, "distinct_queries must dedupe");
    c.expect(*forwarded == 2, "cache hit must not forward to the inner handle");
  }
  *forwarded = 0;
  RngStream rng = RngStream::from_seed(ctx.seed ^ 0x3E7E);
  uint64_t distinct_sum = 0;
  for (int rep = 0; rep < ctx.pick(300, 3000); ++rep) {
    Outcome out = run_once(counted, rng);
    distinct_sum += out.queries_distinct;
    c.expect(out.queries_total >= out.queries_distinct,
             "total queries below distinct queries");
  }
  c.expect(*forwarded == distinct_sum,
           "tester-reported distinct queries diverge from forwarded evals");
  return c.result("function.meter-conservation");
}

CheckResult check_generator_determinism(const Context&) {
  Collector c;
  std::vector<CorpusItem> items = {
      {FamilySpec::dictator(2), 6},
      {FamilySpec::majority(), 7},
      {FamilySpec::parity(), 6},
      {FamilySpec::threshold_at(3), 6},
      {FamilySpec::bernoulli(0.37, 123), 8},
      {FamilySpec::random_monotone(7, 5), 8},
      {FamilySpec::blended(FamilySpec::majority(), 1, 0x6, 9), 7},
  };
  for (const CorpusItem& item : items) {
    TruthTable a = table_of(item);
    TruthTable b = table_of(item);
    c.expect(a == b, "instantiate not deterministic for " + item.spec.name());
    FamilySpec reparsed = FamilySpec::parse(item.spec.name());
    c.expect(to_truth_table(instantiate(reparsed, item.n)) == a,
             "family name does not round-trip: " + item.spec.name());
  }
  return c.result("function.generator-determinism");
}

CheckResult check_random_monotone(const Context& ctx) {
  Collector c;
  std::vector<int> dims = ctx.full() ? std::vector<int>{6, 9, 12}
                                     : std::vector<int>{6, 9};
  for (int n : dims) {
    for (uint64_t seed = 1; seed <= static_cast<uint64_t>(ctx.pick(5, 10)); ++seed) {
      TruthTable t = to_truth_table(
          instantiate(FamilySpec::random_monotone(ctx.seed + seed, 4), n));
      InfluenceReport report = influence_report(t);
      c.expect(report.violating_count == 0,
               "random monotone instance has violating edges at n=" + std::to_string(n));
    }
  }
  TruthTable t = to_truth_table(instantiate(FamilySpec::random_monotone(ctx.seed, 4), 8));
  c.expect(distance_to_monotonicity(t).flips == 0,
           "random monotone instance at positive min-cut distance");
  return c.result("function.random-monotone");
}

// ---------------------------------------------------------------------------
// exact-oracle checks

void edge_count_identity_one(Collector& c, const TruthTable& t) {
  InfluenceReport report = influence_report(t);
  int n = t.n();
  int64_t sensitivity_sum = 0;
  for (uint64_t idx = 0; idx < t.size(); ++idx)
    for (int i = 0; i < n; ++i)
      sensitivity_sum += t.at(idx) != t.at(idx ^ (uint64_t{1} << i));
  c.expect(sensitivity_sum == 2 * report.influential_count,
           "sensitivity sum != 2 * influential edges");
  c.expect(Rational::of(sensitivity_sum, int64_t{1} << n) == report.total_influence,
           "I(f) mismatch between definitions");
  c.expect(report.violating_count >= 0 &&
               report.violating_count <= report.influential_count,
           "violating count out of range");
}

CheckResult check_edge_count_identity(const Context& ctx) {
  Collector c;
  for (int n = 1; n <= 3; ++n)
    for (uint64_t mask = 0; mask < (uint64_t{1} << (1 << n)); ++mask)
      edge_count_identity_one(c, table_from_mask(n, mask));
  RngStream rng = RngStream::from_seed(ctx.seed ^ 0xEC1);
  for (int rep = 0; rep < ctx.pick(500, 65536); ++rep)
    edge_count_identity_one(c, table_from_mask(4, rng.next_u64() & 0xFFFF));
  for (const CorpusItem& item : random_corpus(ctx.pick(40, 200), 5, 12, ctx.seed ^ 0xEC2))
    edge_count_identity_one(c, table_of(item));
  return c.result("oracles.edge-count-identity");
}

CheckResult check_nonsticky_fraction(const Context& ctx) {
  Collector c;
  for (const CorpusItem& item :
       random_corpus(ctx.pick(40, 200), 4, 12, ctx.seed ^ 0x51)) {
    TruthTable t = table_of(item);
    InfluenceReport report = influence_report(t);
    int ell_max = 1 << ceil_log2(static_cast<uint64_t>(item.n));
    StickyTable table(t, ell_max);
    for (uint64_t ell = 1; ell <= static_cast<uint64_t>(ell_max); ell <<= 1) {
      FEllSet fell = sticky_set(t, table, ell);
      // |N|/2^n <= 2 ell I(f)/n, cross-multiplied to integers
      c.expect(static_cast<int64_t>(fell.nonsticky_count) * item.n <=
                   4 * static_cast<int64_t>(ell) * report.influential_count,
               "non-sticky fraction exceeds 2 ell I/n for " + item.spec.name());
    }
  }
  return c.result("oracles.nonsticky-fraction");
}

CheckResult check_sticky_nesting(const Context& ctx) {
  Collector c;
  for (const CorpusItem& item :
       random_corpus(ctx.pick(40, 200), 4, 12, ctx.seed ^ 0x0B5)) {
    TruthTable t = table_of(item);
    int ell_max = 1 << ceil_log2(static_cast<uint64_t>(item.n));
    StickyTable table(t, ell_max);
    FEllSet prev = sticky_set(t, table, 1);
    for (uint64_t ell = 2; ell <= static_cast<uint64_t>(ell_max); ell <<= 1) {
      FEllSet cur = sticky_set(t, table, ell);
      for (uint64_t x = 0; x < t.size(); ++x)
        c.expect(!cur.sticky[x] || prev.sticky[x],
                 "sticky sets not nested at ell=" + std::to_string(ell));
      prev = std::move(cur);
    }
    // survival must be non-increasing in ell
    for (uint64_t x = 0; x < t.size(); ++x)
      for (int ell = 1; ell <= ell_max; ++ell)
        c.expect(table.survival(ell, x) <= table.survival(ell - 1, x) + 1e-15,
                 "survival increased with walk length");
  }
  return c.result("oracles.sticky-nesting");
}

void survival_product_one(Collector& c, const TruthTable& t, int ell) {
  int n = t.n();
  double edge_base = 1.0 / (n * std::ldexp(1.0, n));  // 1/(n 2^n)
  StickyTable table(t, ell);
  WalkCensus census(t, ell);
  double total = static_cast<double>(census.total());
  for (uint64_t lower = 0; lower < t.size(); ++lower) {
    for (int coord = 1; coord <= n; ++coord) {
      if (lower & (uint64_t{1} << (coord - 1))) continue;
      uint64_t upper = lower | (uint64_t{1} << (coord - 1));
      double undirected_census = 0.0, undirected_formula = 0.0;
      for (int step = 1; step <= ell; ++step) {
        double down =
            static_cast<double>(census.clean_crossings(step, lower, coord, 0)) /
            total;
        double up =
            static_cast<double>(census.clean_crossings(step, lower, coord, 1)) /
            total;
        double down_formula = edge_base * table.survival(step - 1, lower) *
                              table.survival(ell - step, upper);
        double up_formula = edge_base * table.survival(step - 1, upper) *
                            table.survival(ell - step, lower);
        c.expect(std::abs(down - down_formula) <= 1e-9,
                 "survival product mismatch (downward crossing)");
        c.expect(std::abs(up - up_formula) <= 1e-9,
                 "survival product mismatch (upward crossing)");
        undirected_census += down + up;
        undirected_formula += 2.0 * edge_base * table.survival(step - 1, lower) *
                              table.survival(ell - step, upper);
      }
      c.expect(std::abs(undirected_census - undirected_formula) <= 1e-9,
               "per-edge clean-crossing probability mismatch");
    }
  }
}

CheckResult check_survival_product(const Context& ctx) {
  Collector c;
  for (int n : {1, 2})
    for (uint64_t mask = 0; mask < (uint64_t{1} << (1 << n)); ++mask)
      for (int ell : {1, 2, 3, 4}) survival_product_one(c, table_from_mask(n, mask), ell);
  for (uint64_t mask = 0; mask < 256; ++mask)
    for (int ell : {1, 2, 3, 4}) survival_product_one(c, table_from_mask(3, mask), ell);
  RngStream rng = RngStream::from_seed(ctx.seed ^ 0xC1A);
  for (int rep = 0; rep < ctx.pick(100, 800); ++rep) {
    TruthTable t = table_from_mask(4, rng.next_u64() & 0xFFFF);
    for (int ell : {1, 2, 3, 4}) survival_product_one(c, t, ell);
  }
  return c.result("oracles.survival-product");
}

void sandwich_one(Collector& c, const TruthTable& t, int ell) {
  StickyTable table(t, ell);
  FEllSet fell = sticky_set(t, table, ell);
  WalkCensus census(t, ell);
  double event_sum = event_probability_sum(fell, table);
  Rational rejection = census.rejection_probability();
  Rational differ = census.endpoints_differ_probability();
  c.expect(event_sum <= rejection.to_double() + 1e-9,
           "event sum exceeds exhaustive rejection probability");
  c.expect(rejection <= differ, "rejection probability exceeds Pr[f(x) != f(y)]");
  c.expect(rejection >=
               Rational::of(static_cast<int64_t>(ell) *
                                static_cast<int64_t>(fell.edges.size()),
                            4 * static_cast<int64_t>(t.n()) *
                                static_cast<int64_t>(t.size())),
           "rejection probability below ell |F_ell| / (4 n 2^n)");
}

CheckResult check_sandwich(const Context& ctx) {
  Collector c;
  for (uint64_t mask = 0; mask < 256; ++mask)
    for (int ell : {1, 2, 4}) sandwich_one(c, table_from_mask(3, mask), ell);
  RngStream rng = RngStream::from_seed(ctx.seed ^ 0x5A);
  for (int rep = 0; rep < ctx.pick(300, 3000); ++rep) {
    TruthTable t = table_from_mask(4, rng.next_u64() & 0xFFFF);
    for (int ell : {1, 2, 4}) sandwich_one(c, t, ell);
  }
  return c.result("oracles.sandwich");
}

void mincut_one(Collector& c, const TruthTable& t, bool against_bruteforce) {
  DistanceReport report = distance_to_monotonicity(t);
  c.expect(influence_report(report.witness).violating_count == 0,
           "min-cut witness is not monotone");
  c.expect(hamming(t, report.witness) == report.flips,
           "witness Hamming distance != flips");
  c.expect(report.distance == Rational::of(report.flips, static_cast<int64_t>(t.size())),
           "distance field inconsistent with flips");
  if (against_bruteforce)
    c.expect(report.flips == distance_bruteforce(t),
             "min-cut distance != brute-force distance");
}

CheckResult check_mincut_witness(const Context& ctx) {
  Collector c;
  for (uint64_t mask = 0; mask < 256; ++mask)
    mincut_one(c, table_from_mask(3, mask), true);
  RngStream rng = RngStream::from_seed(ctx.seed ^ 0xD15);
  for (int rep = 0; rep < ctx.pick(200, 1000); ++rep)
    mincut_one(c, table_from_mask(4, rng.next_u64() & 0xFFFF), true);
  for (const CorpusItem& item :
       random_corpus(ctx.pick(6, 24), 8, ctx.pick(10, 12), ctx.seed ^ 0xD16))
    mincut_one(c, table_of(item), false);
  return c.result("oracles.mincut-witness");
}

// ---------------------------------------------------------------------------
// tester checks

CheckResult check_one_sidedness(const Context& ctx) {
  Collector c;
  std::vector<std::pair<std::string, BoolFun>> monotone = {
      {"dictator", instantiate(FamilySpec::dictator(1), 10)},
      {"majority", instantiate(FamilySpec::majority(), 9)},
      {"threshold", instantiate(FamilySpec::threshold_at(4), 10)},
      {"monotone-a", instantiate(FamilySpec::random_monotone(ctx.seed ^ 1, 4), 10)},
      {"monotone-b", instantiate(FamilySpec::random_monotone(ctx.seed ^ 2, 6), 10)},
  };
  uint64_t per_fn = ctx.mc_trials() / monotone.size();
  RngStream base = RngStream::from_seed(ctx.seed ^ 0x15ED);
  uint64_t rejections = 0;
  for (size_t i = 0; i < monotone.size(); ++i) {
    for (uint64_t trial = 0; trial < per_fn; ++trial) {
      RngStream rng = base.substream(i * per_fn + trial);
      if (run_once(monotone[i].second, rng).rejected) ++rejections;
    }
  }
  c.expect(rejections == 0,
           "tester rejected a monotone function " + std::to_string(rejections) + " times");

  // Every Reject must carry a re-verifiable violation witness.
  BoolFun anti = instantiate(FamilySpec::anti_dictator(1), 6);
  RngStream rng = RngStream::from_seed(ctx.seed ^ 0x15EE);
  int rejected = 0;
  for (int rep = 0; rep < ctx.pick(20000, 100000); ++rep) {
    Outcome out = run_once(anti, rng);
    if (out.rejected) {
      ++rejected;
      c.expect(out.witness.has_value(), "Reject without witness");
      if (out.witness)
        c.expect(is_violation(anti, out.witness->edge),
                 "witness fails re-verification");
    }
  }
  c.expect(rejected > 0, "anti-dictator produced no rejections at all");
  return c.result("tester.one-sidedness");
}

CheckResult check_query_bound(const Context& ctx) {
  Collector c;
  BoolFun anti16 = instantiate(FamilySpec::anti_dictator(1), 16);
  RngStream rng = RngStream::from_seed(ctx.seed ^ 0x0B0);
  for (uint64_t ell : {uint64_t{1}, uint64_t{2}, uint64_t{4}, uint64_t{16}}) {
    uint64_t bound = 2 + ceil_log2(ell + 1);
    for (int rep = 0; rep < ctx.pick(20000, 200000); ++rep) {
      Outcome out = run_once_with_length(anti16, ell, rng);
      c.expect(out.queries_distinct <= bound,
               "distinct queries exceed 2 + ceil(log2(ell+1)) at ell=" +
                   std::to_string(ell));
    }
  }
  for (int n : {4, 16, 256, 4096}) {
    BoolFun f = instantiate(FamilySpec::bernoulli(0.4, ctx.seed ^ n), n);
    uint64_t bound = 3 + ceil_log2(static_cast<uint64_t>(n));
    for (int rep = 0; rep < ctx.pick(2000, 20000); ++rep) {
      Outcome out = run_once(f, rng);
      c.expect(out.queries_distinct <= bound,
               "distinct queries exceed 2 + ceil(log2 n) + 1 at n=" + std::to_string(n));
    }
  }
  if (ctx.full()) {
    BoolFun parity = instantiate(FamilySpec::parity(), 1 << 20);
    uint64_t bound = 3 + 20;
    for (int rep = 0; rep < 50; ++rep) {
      Outcome out = run_once(parity, rng);
      c.expect(out.queries_distinct <= bound, "distinct queries exceed bound at n=2^20");
    }
  }
  return c.result("tester.query-bound");
}

CheckResult check_exactness_vs_oracle(const Context& ctx) {
  Collector c;
  std::vector<TruthTable> corpus;
  corpus.push_back(to_truth_table(instantiate(FamilySpec::anti_dictator(1), 2)));
  corpus.push_back(to_truth_table(instantiate(FamilySpec::parity(), 2)));
  RngStream mask_rng = RngStream::from_seed(ctx.seed ^ 0xE0);
  for (int rep = 0; rep < ctx.pick(12, 10); ++rep)
    corpus.push_back(table_from_mask(4, mask_rng.next_u64() & 0xFFFF));

  uint64_t per_cell = ctx.full() ? 1'000'000 : 30'000;
  int fn_index = 0;
  for (const TruthTable& t : corpus) {
    BoolFun f = handle_of(t);
    int kmax = ceil_log2(static_cast<uint64_t>(t.n()));
    RngStream base = RngStream::from_seed(ctx.seed ^ (0xEAC7 + 131 * fn_index++));
    for (int k = 0; k <= kmax; ++k) {
      uint64_t ell = uint64_t{1} << k;
      uint64_t rejections = 0;
      RngStream cell = base.substream(k);
      for (uint64_t trial = 0; trial < per_cell; ++trial) {
        RngStream rng = cell.substream(trial);
        if (run_once_with_length(f, ell, rng).rejected) ++rejections;
      }
      double exact =
          exhaustive_rejection_probability(t, static_cast<int>(ell)).to_double();
      double rate = static_cast<double>(rejections) / static_cast<double>(per_cell);
      double err = binomial_stderr(exact, per_cell);
      if (exact == 0.0 || exact == 1.0) {
        c.expect(rate == exact, "deterministic cell rate mismatch");
      } else {
        c.expect(std::abs(rate - exact) <= 3.0 * err,
                 "stratified rate " + fmt(rate) + " not within 3 sigma of exact " +
                     fmt(exact) + " at ell=" + std::to_string(ell));
      }
    }
  }
  return c.result("tester.exactness-vs-oracle");
}

CheckResult check_nonsticky_fraction2_constant(const Context& ctx) {
  Collector c;
  std::vector<CorpusItem> items = {{FamilySpec::anti_dictator(1), 8}};
  if (ctx.full()) {
    items.push_back({FamilySpec::anti_dictator(1), 10});
    items.push_back({FamilySpec::anti_dictator(1), 12});
  }
  for (const CorpusItem& extra :
       random_corpus(ctx.pick(3, 6), 8, ctx.pick(8, 12), ctx.seed ^ 0x52))
    items.push_back(extra);

  int fn_index = 0;
  for (const CorpusItem& item : items) {
    TruthTable t = table_of(item);
    BoolFun f = handle_of(t);
    int kmax = ceil_log2(static_cast<uint64_t>(item.n));
    StickyTable table(t, 1 << kmax);
    uint64_t per_cell = ctx.mc_trials() / (static_cast<uint64_t>(kmax) + 1);
    RngStream base = RngStream::from_seed(ctx.seed ^ (0x52C0 + 257 * fn_index++));
    for (int k = 0; k <= kmax; ++k) {
      uint64_t ell = uint64_t{1} << k;
      FEllSet fell = sticky_set(t, table, ell);
      double bound = static_cast<double>(ell) * static_cast<double>(fell.edges.size()) /
                     (4.0 * item.n * std::ldexp(1.0, item.n));
      if (bound == 0.0) continue;
      uint64_t rejections = 0;
      RngStream cell = base.substream(k);
      for (uint64_t trial = 0; trial < per_cell; ++trial) {
        RngStream rng = cell.substream(trial);
        if (run_once_with_length(f, ell, rng).rejected) ++rejections;
      }
      double rate = static_cast<double>(rejections) / static_cast<double>(per_cell);
      double err = binomial_stderr(rate, per_cell);
      c.expect(rate + 3.0 * err >= bound,
               "conditional rejection rate " + fmt(rate) + " below oracle bound " +
                   fmt(bound) + " for " + item.spec.name() +
                   " ell=" + std::to_string(ell));
    }
  }
  return c.result("tester.rejection-bound");
}

CheckResult check_binary_search(const Context& ctx) {
  Collector c;
  RngStream rng = RngStream::from_seed(ctx.seed ^ 0xB15);
  int exercised = 0;
  for (int rep = 0; rep < ctx.pick(3000, 20000); ++rep) {
    int n = 2 + static_cast<int>(rng.below(9));
    TruthTable t(n);
    for (uint64_t idx = 0; idx < t.size(); ++idx) t.set(idx, rng.next_bool());
    BoolFun f = handle_of(t);
    uint64_t ell = 1 + rng.below(12);
    Point start = sample_point(rng, n);
    WalkPath path = random_walk(rng, start, ell);
    int v0 = f.eval(path.start);
    int v1 = f.eval(path.end());
    QueryMeter meter(f);
    if (v0 == v1) {
      bool threw = false;
      try {
        binary_search_influential(meter, path);
      } catch (const std::invalid_argument&) {
        threw = true;
      }
      c.expect(threw, "binary search accepted equal endpoint values");
      continue;
    }
    ++exercised;
    auto [edge, t_pos] = binary_search_influential(meter, path);
    c.expect(t_pos >= 1 && t_pos <= ell, "edge position out of range");
    c.expect(edge == path.edge_at(t_pos), "returned edge not on the path");
    c.expect(f.eval(edge.lower) != f.eval(edge.upper()),
             "returned edge is not influential");
    c.expect(meter.distinct_queries() <= 2 + static_cast<uint64_t>(ceil_log2(ell + 1)),
             "binary search exceeded its query budget");
  }
  c.expect(exercised > 0, "no case exercised the search");

  // pinned traces from the bisection rule
  {
    TruthTable t(3);
    // values keyed by the actual path below: 000 ->0, 100 ->0, 110 ->1, 111 ->1
    t.set(0, 0);
    t.set(1, 0);
    t.set(3, 1);
    t.set(7, 1);
    BoolFun f = handle_of(t);
    QueryMeter meter(f);
    WalkPath path{Point::from_index(3, 0), {1, 2, 3}};
    auto [edge, pos] = binary_search_influential(meter, path);
    c.expect(pos == 2, "trace (0,0,1,1) should return t=2");
    c.expect(edge == path.edge_at(2), "trace (0,0,1,1) returned wrong edge");
  }
  {
    TruthTable t(3);
    // values (0,1,0,1) along the same steps: prefers the left half, t=1
    t.set(0, 0);
    t.set(1, 1);
    t.set(3, 0);
    t.set(7, 1);
    BoolFun f = handle_of(t);
    QueryMeter meter(f);
    WalkPath path{Point::from_index(3, 0), {1, 2, 3}};
    auto [edge, pos] = binary_search_influential(meter, path);
    c.expect(pos == 1, "trace (0,1,0,1) should return t=1");
  }
  return c.result("tester.binary-search");
}

// ---------------------------------------------------------------------------
// harness checks

CheckResult check_harness_determinism(const Context& ctx) {
  Collector c;
  BoolFun f = instantiate(FamilySpec::anti_dictator(1), 6);
  McOptions one_worker{true, 1};
  McOptions three_workers{true, 3};
  auto a = mc_estimate(f, "antidictator:1", 4000, ctx.seed ^ 0xDE7, one_worker);
  auto b = mc_estimate(f, "antidictator:1", 4000, ctx.seed ^ 0xDE7, one_worker);
  auto d = mc_estimate(f, "antidictator:1", 4000, ctx.seed ^ 0xDE7, three_workers);
  c.expect(a.size() == b.size() && a.size() == d.size(), "row count diverged");
  for (size_t i = 0; i < a.size(); ++i) {
    c.expect(csv_line(a[i]) == csv_line(b[i]), "identical seeds produced different rows");
    c.expect(csv_line(a[i]) == csv_line(d[i]), "worker count changed the results");
  }
  return c.result("harness.determinism");
}

CheckResult check_csv_schema(const Context& ctx) {
  Collector c;
  c.expect(std::string(kCsvHeader) ==
               "family,n,ell,trials,rejections,rate,wilson_low,wilson_high,"
               "mean_queries,oracle_bound,exact_rate",
           "CSV header drifted");
  BoolFun f = instantiate(FamilySpec::anti_dictator(1), 5);
  auto rows = mc_estimate(f, "antidictator:1", 500, ctx.seed ^ 0xC5);
  std::string line = csv_line(rows[0]);
  int commas = static_cast<int>(std::count(line.begin(), line.end(), ','));
  c.expect(commas == 10, "row does not have 11 fields");
  c.expect(line.size() >= 2 && line.compare(line.size() - 2, 2, ",,") == 0,
           "absent oracle values must serialize as empty fields");
  c.expect(line.find("mixed") != std::string::npos,
           "mixed-length rows must say 'mixed' in the ell column");
  c.expect(rows[0].wilson_low <= rows[0].rate && rows[0].rate <= rows[0].wilson_high,
           "Wilson interval does not bracket the rate");
  return c.result("harness.csv-schema");
}

using CheckFn = std::function<CheckResult(const Context&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"hypercube.edge-canonicalization", check_edge_canonicalization},
      {"hypercube.stationarity", check_stationarity},
      {"hypercube.uniform-edge-marginal", check_uniform_edge_marginal},
      {"hypercube.reproducibility", check_reproducibility},
      {"function.meter-conservation", check_meter_conservation},
      {"function.generator-determinism", check_generator_determinism},
      {"function.random-monotone", check_random_monotone},
      {"oracles.edge-count-identity", check_edge_count_identity},
      {"oracles.nonsticky-fraction", check_nonsticky_fraction},
      {"oracles.sticky-nesting", check_sticky_nesting},
      {"oracles.survival-product", check_survival_product},
      {"oracles.sandwich", check_sandwich},
      {"oracles.mincut-witness", check_mincut_witness},
      {"tester.one-sidedness", check_one_sidedness},
      {"tester.query-bound", check_query_bound},
      {"tester.exactness-vs-oracle", check_exactness_vs_oracle},
      {"tester.rejection-bound", check_nonsticky_fraction2_constant},
      {"tester.binary-search", check_binary_search},
      {"harness.determinism", check_harness_determinism},
      {"harness.csv-schema", check_csv_schema},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& required_check_ids() {
  static const std::vector<std::string> ids = {
      "hypercube.edge-canonicalization",
      "hypercube.stationarity",
      "hypercube.uniform-edge-marginal",
      "hypercube.reproducibility",
      "function.meter-conservation",
      "function.generator-determinism",
      "function.random-monotone",
      "oracles.edge-count-identity",
      "oracles.nonsticky-fraction",
      "oracles.sticky-nesting",
      "oracles.survival-product",
      "oracles.sandwich",
      "oracles.mincut-witness",
      "tester.one-sidedness",
      "tester.query-bound",
      "tester.exactness-vs-oracle",
      "tester.rejection-bound",
      "tester.binary-search",
      "harness.determinism",
      "harness.csv-schema",
      "meta.coverage",
  };
  return ids;
}

std::vector<std::string> registered_check_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : registry()) ids.push_back(id);
  ids.push_back("meta.coverage");
  return ids;
}

VerifyReport run_verification(VerifyLevel level, uint64_t seed,
                              std::ostream* progress) {
  Context ctx{level, seed};
  VerifyReport report;
  for (const auto& [id, fn] : registry()) {
    auto start = std::chrono::steady_clock::now();
    CheckResult result = fn(ctx);
    result.millis = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (progress)
      *progress << (result.passed ? "[PASS] " : "[FAIL] ") << result.id << " ("
                << result.detail << ", " << static_cast<int>(result.millis)
                << " ms)\n";
    report.checks.push_back(std::move(result));
  }

  // meta check: every required identifier must have run above
  CheckResult meta;
  meta.id = "meta.coverage";
  meta.passed = true;
  for (const std::string& id : required_check_ids()) {
    if (id == "meta.coverage") continue;
    bool found = false;
    for (const CheckResult& r : report.checks) found |= r.id == id;
    if (!found) {
      meta.passed = false;
      meta.detail = "missing required check: " + id;
      break;
    }
  }
  if (meta.passed)
    meta.detail = std::to_string(required_check_ids().size()) + " identifiers covered";
  if (progress)
    *progress << (meta.passed ? "[PASS] " : "[FAIL] ") << meta.id << " ("
              << meta.detail << ")\n";
  report.checks.push_back(std::move(meta));

  report.all_passed = true;
  for (const CheckResult& r : report.checks) report.all_passed &= r.passed;
  return report;
}

}  // namespace mono
