#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mono/function.hpp"
#include "mono/rational.hpp"
#include "mono/stats.hpp"

namespace mono {

/// Exact edge counts over all n*2^(n-1) hypercube edges.
/// total_influence = influential_count / 2^(n-1).
struct InfluenceReport {
  int n = 0;
  int64_t influential_count = 0;
  int64_t violating_count = 0;
  Rational total_influence;
};

InfluenceReport influence_report(const TruthTable& f);

/// Survival probabilities s[l][x] = Pr[an l-step walk from x crosses no
/// influential edge], computed by the exact dynamic program
///   s[0][x] = 1,
///   s[l][x] = (1/n) * sum over non-influential edges (x, x^e_i) of s[l-1][x^e_i]
/// in double precision. Cost O(ell_max * n * 2^n); n <= 20.
class StickyTable {
 public:
  StickyTable(const TruthTable& f, int ell_max);

  double survival(uint64_t ell, uint64_t x) const { return s_[ell][x]; }
  int n() const { return n_; }
  int ell_max() const { return ell_max_; }

 private:
  int n_;
  int ell_max_;
  std::vector<std::vector<double>> s_;
};

inline StickyTable survival_table(const TruthTable& f, int ell_max) {
  return StickyTable(f, ell_max);
}

/// Classification threshold: a vertex is l-sticky iff s[l][x] >= 1/2 - kStickyTol.
/// Survival values are dyadic-over-n^l rationals evaluated in doubles; the
/// tolerance only reclassifies values within rounding error of exact 1/2,
/// which the definition counts as sticky. Values within kStickyBoundary of
/// 1/2 are reported in boundary_count.
inline constexpr double kStickyTol = 1e-12;
inline constexpr double kStickyBoundary = 1e-9;

/// The l-sticky/non-sticky vertex partition and F_l, the set of violating
/// edges with both endpoints l-sticky. Edges are (lower index, coordinate).
struct FEllSet {
  uint64_t ell = 0;
  std::vector<uint8_t> sticky;
  uint64_t sticky_count = 0;
  uint64_t nonsticky_count = 0;
  uint64_t boundary_count = 0;
  std::vector<std::pair<uint32_t, int>> edges;
};

FEllSet sticky_set(const TruthTable& f, const StickyTable& table, uint64_t ell);

/// Sum over (u,v) in F_l and t in 1..l of (2/(n*2^n)) * s[t-1][u] * s[l-t][v]:
/// the exact total probability that a walk's unique influential edge lies in
/// F_l, hence a certified lower bound on the rejection probability at this l.
/// (Per edge the sum over t is symmetric in (u,v) under t -> l+1-t, which is
/// what makes the one-sided product form exact.)
double event_probability_sum(const FEllSet& fell, const StickyTable& table);

/// Exhaustive walk statistics at tiny scale: enumerates all 2^n * n^l
/// (start, step-sequence) pairs, simulates the tester's deterministic binary
/// search on each, and tallies the per-edge clean-crossing events behind the
/// survival-product identity. n <= 4 and l <= 4.
class WalkCensus {
 public:
  WalkCensus(const TruthTable& f, int ell);

  int n() const { return n_; }
  int ell() const { return ell_; }
  uint64_t total() const { return total_; }
  uint64_t endpoints_differ() const { return endpoints_differ_; }
  uint64_t rejections() const { return rejections_; }

  /// Walks whose step t crosses the edge (lower, lower^coord_bit) in the
  /// given direction (0: lower->upper, 1: upper->lower) while every other
  /// step is non-influential. t is 1-based.
  uint64_t clean_crossings(int t, uint32_t lower, int coord, int direction) const;

  Rational rejection_probability() const {
    return Rational::of(static_cast<int64_t>(rejections_), static_cast<int64_t>(total_));
  }
  Rational endpoints_differ_probability() const {
    return Rational::of(static_cast<int64_t>(endpoints_differ_),
                        static_cast<int64_t>(total_));
  }

 private:
  size_t slot(int t, uint32_t lower, int coord, int direction) const;

  int n_;
  int ell_;
  uint64_t total_ = 0;
  uint64_t endpoints_differ_ = 0;
  uint64_t rejections_ = 0;
  std::vector<uint64_t> clean_;
};

/// Exact probability that one tester invocation with walk length l rejects f,
/// by full enumeration. n <= 4 and l <= 4.
Rational exhaustive_rejection_probability(const TruthTable& f, int ell);

/// Exact distance to monotonicity via a minimum s-t cut (binary isotonic
/// regression). witness is a closest monotone function; g(x) = 1 exactly on
/// the source side of the cut, i.e. on the vertices reachable from the source
/// in the final residual network. n <= 16.
struct DistanceReport {
  int64_t flips = 0;
  Rational distance;
  TruthTable witness;
};

DistanceReport distance_to_monotonicity(const TruthTable& f);

/// All monotone truth tables at dimension n as bitmasks (index i of the mask
/// is f(i)); n <= 4. Sizes 3, 6, 20, 168 at n = 1..4.
std::vector<uint32_t> enumerate_monotone_tables(int n);

/// Minimum Hamming distance to any monotone function by exhaustive
/// enumeration; the independent oracle for the min-cut reduction. n <= 4.
int64_t distance_bruteforce(const TruthTable& f);

/// violating_count / influential_count; degenerate (and 0) when f has no
/// influential edges.
struct ViolatingRatio {
  Rational ratio;
  bool degenerate = false;
};

ViolatingRatio violating_influential_ratio(const TruthTable& f);

/// Sampled edge statistics for functions too large to enumerate: draws
/// `samples` uniform edges, counts influential and violating ones, and
/// reports the Wilson 95% intervals. influence_estimate = n * influential
/// fraction.
struct EdgeSampleStats {
  uint64_t samples = 0;
  uint64_t influential = 0;
  uint64_t violating = 0;
  double influence_estimate = 0.0;
  WilsonInterval influence_ci;
  double violating_ratio = 0.0;  // violating / influential, 0 when degenerate
  WilsonInterval ratio_ci;
  bool degenerate = false;  // no influential edge sampled
};

EdgeSampleStats sample_edge_stats(const BoolFun& f, RngStream& rng, uint64_t samples);

/// One analysis record per function, serializable by the harness.
struct AnalysisReport {
  std::string family;
  int n = 0;
  int64_t influential_count = 0;
  int64_t violating_count = 0;
  Rational total_influence;
  std::optional<Rational> distance;                       // n <= 16
  std::vector<std::pair<uint64_t, uint64_t>> f_ell_sizes;  // (l, |F_l|), n <= 20
};

AnalysisReport analyze_table(const TruthTable& f, const std::string& family_name);

}  // namespace mono
