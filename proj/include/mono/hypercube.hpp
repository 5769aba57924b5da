#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mono/rng.hpp"

namespace mono {

/// A vertex of the hypercube {0,1}^n. Coordinates are 1-based (1..n);
/// coordinate i occupies bit position i-1 of the integer encoding, so
/// index = sum_i bit_i * 2^(i-1). Storage is inline for n <= 128 and
/// heap-backed above that (the tester runs on handle functions up to
/// n = 2^20). Unused high bits of the top word are always zero.
class Point {
 public:
  Point() = default;

  explicit Point(int n) : n_(n), nwords_(words_for(n)) {
    if (n < 1) throw std::invalid_argument("Point: dimension must be >= 1");
    if (nwords_ > kInlineWords) big_.assign(nwords_, 0);
  }

  /// Decode from the integer index. Requires n <= 63.
  static Point from_index(int n, uint64_t index) {
    if (n > 63) throw std::invalid_argument("Point::from_index: n > 63");
    if ((index >> n) != 0)
      throw std::invalid_argument("Point::from_index: index out of range");
    Point p(n);
    p.data()[0] = index;
    return p;
  }

  int dimension() const { return n_; }

  bool bit(int coord) const {
    check_coord(coord);
    return (data()[(coord - 1) >> 6] >> ((coord - 1) & 63)) & 1;
  }

  void set_bit(int coord, bool value) {
    check_coord(coord);
    uint64_t m = uint64_t{1} << ((coord - 1) & 63);
    if (value)
      data()[(coord - 1) >> 6] |= m;
    else
      data()[(coord - 1) >> 6] &= ~m;
  }

  void toggle_bit(int coord) {
    check_coord(coord);
    data()[(coord - 1) >> 6] ^= uint64_t{1} << ((coord - 1) & 63);
  }

  /// Integer encoding; requires n <= 63.
  uint64_t index() const {
    if (n_ > 63) throw std::logic_error("Point::index: n > 63");
    return data()[0];
  }

  int weight() const {
    int w = 0;
    for (int i = 0; i < nwords_; ++i) w += std::popcount(data()[i]);
    return w;
  }

  bool operator==(const Point& o) const {
    if (n_ != o.n_) return false;
    for (int i = 0; i < nwords_; ++i)
      if (data()[i] != o.data()[i]) return false;
    return true;
  }
  bool operator!=(const Point& o) const { return !(*this == o); }

  int word_count() const { return nwords_; }
  const uint64_t* words() const { return data(); }
  uint64_t* words() { return data(); }

  /// 64-bit content hash keyed by `seed` (order- and platform-stable).
  uint64_t hash(uint64_t seed) const {
    uint64_t h = RngStream::mix(seed ^ (uint64_t(n_) * 0x9E3779B97F4A7C15ULL));
    for (int i = 0; i < nwords_; ++i)
      h = RngStream::mix(h ^ (data()[i] + 0x94D049BB133111EBULL * uint64_t(i + 1)));
    return h;
  }

 private:
  static constexpr int kInlineWords = 2;

  static int words_for(int n) { return (n + 63) >> 6; }

  void check_coord(int coord) const {
    if (coord < 1 || coord > n_)
      throw std::out_of_range("Point: coordinate out of range");
  }

  uint64_t* data() { return nwords_ <= kInlineWords ? small_.data() : big_.data(); }
  const uint64_t* data() const {
    return nwords_ <= kInlineWords ? small_.data() : big_.data();
  }

  int n_ = 0;
  int nwords_ = 0;
  std::array<uint64_t, kInlineWords> small_{};
  std::vector<uint64_t> big_;
};

/// A canonical hypercube edge: the lower endpoint (bit(coord) == 0) plus the
/// flipped coordinate. One object per undirected edge.
struct Edge {
  Point lower;
  int coord = 0;

  Point upper() const {
    Point u = lower;
    u.toggle_bit(coord);
    return u;
  }

  bool operator==(const Edge& o) const {
    return coord == o.coord && lower == o.lower;
  }
};

/// Canonical edge through `endpoint` along `coord` (either endpoint accepted).
inline Edge canonical_edge(const Point& endpoint, int coord) {
  Edge e{endpoint, coord};
  if (e.lower.bit(coord)) e.lower.toggle_bit(coord);
  return e;
}

/// An l-step walk: start vertex plus the flipped coordinate of every step.
/// The vertex sequence p_0..p_l is fully determined by (start, steps).
struct WalkPath {
  Point start;
  std::vector<int> steps;

  size_t length() const { return steps.size(); }

  /// p_t for t in 0..l (applies the first t flips; O(t)).
  Point vertex_at(size_t t) const {
    if (t > steps.size()) throw std::out_of_range("WalkPath::vertex_at");
    Point p = start;
    for (size_t i = 0; i < t; ++i) p.toggle_bit(steps[i]);
    return p;
  }

  Point end() const { return vertex_at(steps.size()); }

  /// Canonical edge between p_{t-1} and p_t, t in 1..l. The result is the
  /// same whether the walk crossed the coordinate upward or downward.
  Edge edge_at(size_t t) const {
    if (t < 1 || t > steps.size()) throw std::out_of_range("WalkPath::edge_at");
    return canonical_edge(vertex_at(t - 1), steps[t - 1]);
  }
};

Point flip(const Point& x, int coord);

/// Strict coordinatewise order: x <= y everywhere and x != y.
bool precedes(const Point& x, const Point& y);

/// Uniform vertex of {0,1}^n.
Point sample_point(RngStream& rng, int n);

struct WalkLength {
  int k = 0;
  uint64_t ell = 1;
};

/// k uniform on {0,...,ceil(log2 n)}, ell = 2^k.
WalkLength sample_walk_length(RngStream& rng, int n);

/// Non-lazy walk: every step flips a coordinate drawn uniformly from {1..n}.
WalkPath random_walk(RngStream& rng, const Point& start, uint64_t ell);

/// Smallest k >= 0 with 2^k >= n.
inline int ceil_log2(uint64_t n) {
  if (n == 0) throw std::invalid_argument("ceil_log2(0)");
  return std::bit_width(n - 1);
}

}  // namespace mono
