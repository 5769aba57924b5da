#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mono/hypercube.hpp"

namespace mono {

/// Query interface to a Boolean function f: {0,1}^n -> {0,1}. The evaluator
/// must be total and deterministic.
struct BoolFun {
  int n = 0;
  std::function<int(const Point&)> eval;

  int operator()(const Point& x) const { return eval(x); }
};

/// Dense representation of f, one byte per point, indexed by Point encoding.
/// n <= 30.
class TruthTable {
 public:
  explicit TruthTable(int n);

  int n() const { return n_; }
  uint64_t size() const { return uint64_t{1} << n_; }

  int at(uint64_t index) const { return values_[index]; }
  void set(uint64_t index, int value) { values_[index] = value ? 1 : 0; }

  int evaluate(const Point& x) const;

  bool operator==(const TruthTable& o) const {
    return n_ == o.n_ && values_ == o.values_;
  }

 private:
  int n_;
  std::vector<uint8_t> values_;
};

BoolFun handle_of(std::shared_ptr<const TruthTable> table);
inline BoolFun handle_of(TruthTable table) {
  return handle_of(std::make_shared<const TruthTable>(std::move(table)));
}

/// Materialize f densely; n <= 30.
TruthTable to_truth_table(const BoolFun& f);

/// Text format: line 1 "n=<int>", line 2 a string of 2^n characters from
/// {0,1} in index order. Throws std::runtime_error on malformed input.
void save_truth_table(const TruthTable& table, const std::string& path);
TruthTable load_truth_table(const std::string& path);

/// Wraps a function handle with query accounting. total_queries counts every
/// eval request; distinct_queries counts unique points. With caching enabled
/// (the default) repeated queries are served from the per-run cache, so the
/// calls actually forwarded to the inner handle equal distinct_queries.
/// Single-owner: one meter per tester invocation, never shared across threads.
class QueryMeter {
 public:
  QueryMeter() = default;
  explicit QueryMeter(const BoolFun& f, bool caching = true)
      : fn_(&f), caching_(caching) {}

  int eval(const Point& x);

  uint64_t total_queries() const { return total_; }
  uint64_t distinct_queries() const { return distinct_; }
  int dimension() const { return fn_->n; }

  /// Clears counters and the cache; keeps capacity.
  void reset() {
    total_ = distinct_ = 0;
    cache_.clear();
  }

  void attach(const BoolFun& f) {
    fn_ = &f;
    reset();
  }

 private:
  const BoolFun* fn_ = nullptr;
  bool caching_ = true;
  uint64_t total_ = 0;
  uint64_t distinct_ = 0;
  std::vector<std::pair<Point, int>> cache_;
};

/// Seeded generator families. A spec plus a dimension fully determines the
/// function: instantiating twice yields bitwise-identical truth tables.
struct FamilySpec {
  enum class Kind {
    Dictator,       // f = x_i
    AntiDictator,   // f = 1 - x_i
    Majority,       // odd n only
    Parity,
    Threshold,      // f = 1 iff weight >= t  (t in 0..n+1)
    RandomBernoulli,  // each point 1 with prob p, keyed by seed
    RandomMonotone,   // union of cone_count upward cones over seeded points
    Blended,          // base XOR anti-dictator pattern on a seeded subcube
  };

  Kind kind = Kind::Parity;
  int coord = 1;            // Dictator / AntiDictator / Blended noise coord
  int threshold = 0;        // Threshold
  double prob = 0.5;        // RandomBernoulli
  uint64_t seed = 0;        // seeded families
  int cone_count = 4;       // RandomMonotone
  uint64_t subcube_mask = 0;              // Blended: fixed coordinates (bit i-1 <-> coord i)
  std::shared_ptr<const FamilySpec> base;  // Blended

  /// Canonical text form, e.g. "antidictator:1", "bernoulli:0.5:7",
  /// "monotone:7:4", "blended:2:0x6:9:majority". Round-trips through parse
  /// and contains no commas (safe inside CSV fields).
  std::string name() const;
  static FamilySpec parse(const std::string& text);

  static FamilySpec of(Kind k) {
    FamilySpec s;
    s.kind = k;
    return s;
  }
  static FamilySpec dictator(int i) {
    FamilySpec s = of(Kind::Dictator);
    s.coord = i;
    return s;
  }
  static FamilySpec anti_dictator(int i) {
    FamilySpec s = of(Kind::AntiDictator);
    s.coord = i;
    return s;
  }
  static FamilySpec majority() { return of(Kind::Majority); }
  static FamilySpec parity() { return of(Kind::Parity); }
  static FamilySpec threshold_at(int t) {
    FamilySpec s = of(Kind::Threshold);
    s.threshold = t;
    return s;
  }
  static FamilySpec bernoulli(double p, uint64_t seed) {
    FamilySpec s = of(Kind::RandomBernoulli);
    s.prob = p;
    s.seed = seed;
    return s;
  }
  static FamilySpec random_monotone(uint64_t seed, int cones = 4) {
    FamilySpec s = of(Kind::RandomMonotone);
    s.seed = seed;
    s.cone_count = cones;
    return s;
  }
  static FamilySpec blended(FamilySpec base_spec, int noise_coord,
                            uint64_t subcube_mask, uint64_t seed) {
    FamilySpec s = of(Kind::Blended);
    s.base = std::make_shared<const FamilySpec>(std::move(base_spec));
    s.coord = noise_coord;
    s.subcube_mask = subcube_mask;
    s.seed = seed;
    return s;
  }
};

/// Builds the described function. Throws std::invalid_argument when the
/// parameters do not fit the dimension (e.g. Majority at even n).
BoolFun instantiate(const FamilySpec& spec, int n);

}  // namespace mono
