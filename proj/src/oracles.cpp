#include "mono/oracles.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "mono/mincut.hpp"

namespace mono {

InfluenceReport influence_report(const TruthTable& f) {
  int n = f.n();
  uint64_t size = f.size();
  int64_t influential = 0, violating = 0;
  for (uint64_t idx = 0; idx < size; ++idx) {
    for (int i = 0; i < n; ++i) {
      uint64_t bit = uint64_t{1} << i;
      if (idx & bit) continue;  // enumerate each edge once, from its lower end
      int lo = f.at(idx), hi = f.at(idx | bit);
      if (lo != hi) {
        ++influential;
        if (lo == 1) ++violating;
      }
    }
  }
  return {n, influential, violating,
          Rational::of(influential, int64_t{1} << (n - 1))};
}

StickyTable::StickyTable(const TruthTable& f, int ell_max)
    : n_(f.n()), ell_max_(ell_max) {
  if (n_ > 20) throw std::invalid_argument("StickyTable: n > 20");
  if (ell_max < 1) throw std::invalid_argument("StickyTable: ell_max must be >= 1");
  uint64_t size = f.size();
  s_.assign(ell_max + 1, std::vector<double>(size, 0.0));
  for (uint64_t x = 0; x < size; ++x) s_[0][x] = 1.0;
  double inv_n = 1.0 / n_;
  for (int ell = 1; ell <= ell_max; ++ell) {
    const auto& prev = s_[ell - 1];
    auto& cur = s_[ell];
    for (uint64_t x = 0; x < size; ++x) {
      int fx = f.at(x);
      double acc = 0.0;
      for (int i = 0; i < n_; ++i) {
        uint64_t y = x ^ (uint64_t{1} << i);
        if (f.at(y) == fx) acc += prev[y];
      }
      cur[x] = acc * inv_n;
    }
  }
}

FEllSet sticky_set(const TruthTable& f, const StickyTable& table, uint64_t ell) {
  if (ell < 1 || ell > static_cast<uint64_t>(table.ell_max()))
    throw std::invalid_argument("sticky_set: ell out of table range");
  int n = f.n();
  uint64_t size = f.size();
  FEllSet out;
  out.ell = ell;
  out.sticky.assign(size, 0);
  for (uint64_t x = 0; x < size; ++x) {
    double s = table.survival(ell, x);
    if (std::abs(s - 0.5) <= kStickyBoundary) ++out.boundary_count;
    if (s >= 0.5 - kStickyTol) {
      out.sticky[x] = 1;
      ++out.sticky_count;
    } else {
      ++out.nonsticky_count;
    }
  }
  for (uint64_t idx = 0; idx < size; ++idx) {
    if (!out.sticky[idx]) continue;
    for (int i = 0; i < n; ++i) {
      uint64_t bit = uint64_t{1} << i;
      if (idx & bit) continue;
      uint64_t up = idx | bit;
      if (f.at(idx) == 1 && f.at(up) == 0 && out.sticky[up])
        out.edges.emplace_back(static_cast<uint32_t>(idx), i + 1);
    }
  }
  return out;
}

double event_probability_sum(const FEllSet& fell, const StickyTable& table) {
  int n = table.n();
  auto ell = static_cast<int>(fell.ell);
  double edge_weight = 2.0 / (static_cast<double>(n) * std::ldexp(1.0, n));
  double total = 0.0;
  for (const auto& [lower, coord] : fell.edges) {
    uint64_t upper = lower | (uint64_t{1} << (coord - 1));
    double per_edge = 0.0;
    for (int t = 1; t <= ell; ++t)
      per_edge += table.survival(t - 1, lower) * table.survival(ell - t, upper);
    total += edge_weight * per_edge;
  }
  return total;
}

WalkCensus::WalkCensus(const TruthTable& f, int ell) : n_(f.n()), ell_(ell) {
  if (n_ > 4 || ell > 4 || ell < 1)
    throw std::invalid_argument("WalkCensus: requires n <= 4 and 1 <= ell <= 4");
  uint64_t size = f.size();
  clean_.assign(static_cast<size_t>(ell) * size * n_ * 2, 0);

  uint64_t seq_count = 1;
  for (int t = 0; t < ell; ++t) seq_count *= n_;
  total_ = size * seq_count;

  std::vector<int> step(ell, 0);  // 0-based coordinates, odometer order
  std::vector<uint32_t> idx(ell + 1);
  std::vector<int> val(ell + 1);
  for (uint64_t seq = 0; seq < seq_count; ++seq) {
    for (uint32_t x = 0; x < size; ++x) {
      idx[0] = x;
      val[0] = f.at(x);
      int influential = 0, influential_pos = 0;
      for (int t = 1; t <= ell; ++t) {
        idx[t] = idx[t - 1] ^ (uint32_t{1} << step[t - 1]);
        val[t] = f.at(idx[t]);
        if (val[t] != val[t - 1]) {
          ++influential;
          influential_pos = t;
        }
      }
      if (val[0] != val[ell]) {
        ++endpoints_differ_;
        // the tester's deterministic descend-left bisection, replayed on indices
        int lo = 0, hi = ell;
        while (hi - lo > 1) {
          int mid = (lo + hi) / 2;
          if (val[mid] != val[lo])
            hi = mid;
          else
            lo = mid;
        }
        uint32_t a = idx[lo], b = idx[hi];
        uint32_t lower = a < b ? a : b;
        uint32_t upper = a | b;
        if (f.at(lower) == 1 && f.at(upper) == 0) ++rejections_;
      }
      if (influential <= 1) {
        // Steps other than t are all non-influential exactly for these t.
        int t_first = influential == 1 ? influential_pos : 1;
        int t_last = influential == 1 ? influential_pos : ell;
        for (int t = t_first; t <= t_last; ++t) {
          uint32_t a = idx[t - 1], b = idx[t];
          uint32_t lower = a < b ? a : b;
          int direction = a < b ? 0 : 1;
          ++clean_[slot(t, lower, step[t - 1] + 1, direction)];
        }
      }
    }
    // advance the step odometer
    for (int t = 0; t < ell; ++t) {
      if (++step[t] < n_) break;
      step[t] = 0;
    }
  }
}

size_t WalkCensus::slot(int t, uint32_t lower, int coord, int direction) const {
  return (((static_cast<size_t>(t - 1) * (uint64_t{1} << n_) + lower) * n_ +
           (coord - 1)) *
          2) +
         direction;
}

uint64_t WalkCensus::clean_crossings(int t, uint32_t lower, int coord,
                                     int direction) const {
  if (t < 1 || t > ell_) throw std::out_of_range("WalkCensus::clean_crossings");
  return clean_[slot(t, lower, coord, direction)];
}

Rational exhaustive_rejection_probability(const TruthTable& f, int ell) {
  return WalkCensus(f, ell).rejection_probability();
}

DistanceReport distance_to_monotonicity(const TruthTable& f) {
  int n = f.n();
  if (n > 16) throw std::invalid_argument("distance_to_monotonicity: n > 16");
  uint64_t size = f.size();
  int source = static_cast<int>(size);
  int sink = source + 1;
  int64_t inf_cap = static_cast<int64_t>(size) + 1;

  MaxFlow flow(static_cast<int>(size) + 2);
  for (uint64_t x = 0; x < size; ++x) {
    if (f.at(x))
      flow.add_edge(source, static_cast<int>(x), 1);
    else
      flow.add_edge(static_cast<int>(x), sink, 1);
    for (int i = 0; i < n; ++i) {
      uint64_t bit = uint64_t{1} << i;
      if (!(x & bit))
        flow.add_edge(static_cast<int>(x), static_cast<int>(x | bit), inf_cap);
    }
  }
  int64_t flips = flow.run(source, sink);
  auto side = flow.source_side(source);
  TruthTable witness(n);
  for (uint64_t x = 0; x < size; ++x) witness.set(x, side[x]);
  return {flips, Rational::of(flips, static_cast<int64_t>(size)),
          std::move(witness)};
}

std::vector<uint32_t> enumerate_monotone_tables(int n) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("enumerate_monotone_tables: n must be in 1..4");
  uint64_t size = uint64_t{1} << n;
  std::vector<uint32_t> out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << size); ++mask) {
    bool monotone = true;
    for (uint64_t idx = 0; idx < size && monotone; ++idx) {
      if (!((mask >> idx) & 1)) continue;
      for (int i = 0; i < n; ++i) {
        uint64_t bit = uint64_t{1} << i;
        if (idx & bit) continue;
        if (!((mask >> (idx | bit)) & 1)) {  // f(lower)=1, f(upper)=0
          monotone = false;
          break;
        }
      }
    }
    if (monotone) out.push_back(static_cast<uint32_t>(mask));
  }
  return out;
}

int64_t distance_bruteforce(const TruthTable& f) {
  int n = f.n();
  if (n > 4) throw std::invalid_argument("distance_bruteforce: n > 4");
  uint32_t fmask = 0;
  for (uint64_t idx = 0; idx < f.size(); ++idx)
    if (f.at(idx)) fmask |= uint32_t{1} << idx;
  int best = 1 << n;
  for (uint32_t g : enumerate_monotone_tables(n))
    best = std::min(best, std::popcount(fmask ^ g));
  return best;
}

ViolatingRatio violating_influential_ratio(const TruthTable& f) {
  InfluenceReport report = influence_report(f);
  if (report.influential_count == 0) return {Rational::of(0, 1), true};
  return {Rational::of(report.violating_count, report.influential_count), false};
}

EdgeSampleStats sample_edge_stats(const BoolFun& f, RngStream& rng,
                                  uint64_t samples) {
  if (samples < 1) throw std::invalid_argument("sample_edge_stats: samples >= 1");
  EdgeSampleStats stats;
  stats.samples = samples;
  auto n = static_cast<uint64_t>(f.n);
  for (uint64_t s = 0; s < samples; ++s) {
    Point x = sample_point(rng, f.n);
    int coord = static_cast<int>(rng.below(n)) + 1;
    Edge e = canonical_edge(x, coord);
    int lo = f.eval(e.lower);
    int hi = f.eval(e.upper());
    if (lo != hi) {
      ++stats.influential;
      if (lo == 1) ++stats.violating;
    }
  }
  stats.influence_ci = wilson_interval(stats.influential, samples);
  stats.influence_estimate =
      static_cast<double>(f.n) * static_cast<double>(stats.influential) /
      static_cast<double>(samples);
  stats.influence_ci.low *= static_cast<double>(f.n);
  stats.influence_ci.high *= static_cast<double>(f.n);
  if (stats.influential == 0) {
    stats.degenerate = true;
  } else {
    stats.violating_ratio = static_cast<double>(stats.violating) /
                            static_cast<double>(stats.influential);
    stats.ratio_ci = wilson_interval(stats.violating, stats.influential);
  }
  return stats;
}

AnalysisReport analyze_table(const TruthTable& f, const std::string& family_name) {
  AnalysisReport report;
  report.family = family_name;
  report.n = f.n();
  InfluenceReport inf = influence_report(f);
  report.influential_count = inf.influential_count;
  report.violating_count = inf.violating_count;
  report.total_influence = inf.total_influence;
  if (f.n() <= 16) report.distance = distance_to_monotonicity(f).distance;
  if (f.n() <= 16) {
    int ell_max = 1 << ceil_log2(static_cast<uint64_t>(f.n()));
    StickyTable table(f, ell_max);
    for (uint64_t ell = 1; ell <= static_cast<uint64_t>(ell_max); ell <<= 1)
      report.f_ell_sizes.emplace_back(ell, sticky_set(f, table, ell).edges.size());
  }
  return report;
}

}  // namespace mono
