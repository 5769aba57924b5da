#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "mono/hypercube.hpp"
#include "mono/rng.hpp"

using namespace mono;

TEST_CASE("flip toggles exactly one coordinate") {
  // coordinate 1 written leftmost in these comments: (000, 1) -> 100
  Point x = Point::from_index(3, 0);
  CHECK(flip(x, 1).index() == 1);
  // (111, 3) -> 110
  Point y = Point::from_index(3, 7);
  CHECK(flip(y, 3).index() == 3);

  RngStream rng = RngStream::from_seed(42);
  for (int rep = 0; rep < 500; ++rep) {
    int n = 1 + static_cast<int>(rng.below(80));
    Point p = sample_point(rng, n);
    int i = 1 + static_cast<int>(rng.below(n));
    Point q = flip(p, i);
    int dist = 0;
    for (int c = 1; c <= n; ++c) dist += p.bit(c) != q.bit(c);
    CHECK(dist == 1);
    CHECK(flip(q, i) == p);  // involution
  }

  CHECK_THROWS_AS(flip(x, 0), std::out_of_range);
  CHECK_THROWS_AS(flip(x, 4), std::out_of_range);
}

TEST_CASE("precedes is the strict coordinatewise order") {
  // (010, 011): second strictly dominates
  CHECK(precedes(Point::from_index(3, 2), Point::from_index(3, 6)));
  // (010, 001): incomparable
  CHECK_FALSE(precedes(Point::from_index(3, 2), Point::from_index(3, 4)));
  CHECK_FALSE(precedes(Point::from_index(3, 4), Point::from_index(3, 2)));
  // strictness
  Point x = Point::from_index(3, 5);
  CHECK_FALSE(precedes(x, x));
  CHECK_THROWS_AS(precedes(Point::from_index(3, 0), Point::from_index(4, 0)),
                  std::invalid_argument);
}

TEST_CASE("sample_point is uniform") {
  RngStream rng = RngStream::from_seed(7);
  const int trials = 100000;
  int ones = 0;
  for (int t = 0; t < trials; ++t) ones += sample_point(rng, 1).index() == 1;
  CHECK(std::abs(ones / double(trials) - 0.5) < 0.01);

  std::map<uint64_t, int> counts;
  for (int t = 0; t < trials; ++t) ++counts[sample_point(rng, 2).index()];
  for (uint64_t idx = 0; idx < 4; ++idx)
    CHECK(std::abs(counts[idx] / double(trials) - 0.25) < 0.01);
}

TEST_CASE("fixed seeds replay identically") {
  RngStream a = RngStream::from_seed(99), b = RngStream::from_seed(99);
  for (int t = 0; t < 200; ++t) {
    CHECK(sample_point(a, 67) == sample_point(b, 67));
    CHECK(a.below(13) == b.below(13));
  }
  RngStream c = RngStream::from_seed(100);
  bool same = true;
  RngStream a2 = RngStream::from_seed(99);
  for (int t = 0; t < 16; ++t) same &= a2.next_u64() == c.next_u64();
  CHECK_FALSE(same);
}

TEST_CASE("sample_walk_length draws k uniformly up to ceil(log2 n)") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(8) == 3);
  CHECK(ceil_log2(9) == 4);

  RngStream rng = RngStream::from_seed(11);
  std::map<int, int> counts;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    WalkLength wl = sample_walk_length(rng, 8);
    CHECK(wl.ell == (uint64_t{1} << wl.k));
    ++counts[wl.k];
  }
  CHECK(counts.size() == 4);  // k in {0,1,2,3}
  for (const auto& [k, count] : counts)
    CHECK(std::abs(count / double(trials) - 0.25) < 0.01);

  for (int t = 0; t < 100; ++t) {
    WalkLength wl = sample_walk_length(rng, 1);
    CHECK(wl.k == 0);
    CHECK(wl.ell == 1);
  }
  for (int t = 0; t < 1000; ++t) CHECK(sample_walk_length(rng, 5).k <= 3);
}

TEST_CASE("random_walk structure") {
  RngStream rng = RngStream::from_seed(5);
  Point start = sample_point(rng, 6);
  WalkPath empty = random_walk(rng, start, 0);
  CHECK(empty.length() == 0);
  CHECK(empty.end() == start);

  // n=1: the only neighbor alternates, path 0,1,0,1
  WalkPath line = random_walk(rng, Point::from_index(1, 0), 3);
  CHECK(line.vertex_at(0).index() == 0);
  CHECK(line.vertex_at(1).index() == 1);
  CHECK(line.vertex_at(2).index() == 0);
  CHECK(line.vertex_at(3).index() == 1);

  WalkPath w = random_walk(rng, start, 32);
  CHECK(w.length() == 32);
  for (size_t t = 1; t <= w.length(); ++t) {
    Point a = w.vertex_at(t - 1), b = w.vertex_at(t);
    int dist = 0;
    for (int c = 1; c <= 6; ++c) dist += a.bit(c) != b.bit(c);
    CHECK(dist == 1);
  }
}

TEST_CASE("edge_at canonicalizes both traversal directions") {
  WalkPath up{Point::from_index(2, 0), {1}};
  Edge e1 = up.edge_at(1);
  CHECK(e1.lower.index() == 0);
  CHECK(e1.coord == 1);

  WalkPath down{Point::from_index(2, 1), {1}};  // walk descended
  Edge e2 = down.edge_at(1);
  CHECK(e2 == e1);

  CHECK_THROWS_AS(up.edge_at(2), std::out_of_range);
  CHECK_THROWS_AS(up.edge_at(0), std::out_of_range);
}

TEST_CASE("edge marginal matches 2/(n 2^n) from a uniform start") {
  // n=2: a fixed edge should be hit at step t with probability 1/4
  RngStream rng = RngStream::from_seed(31337);
  const int trials = 1000000;
  const Edge target{Point::from_index(2, 0), 1};
  int hits_t1 = 0, hits_t2 = 0;
  for (int t = 0; t < trials; ++t) {
    Point start = sample_point(rng, 2);
    WalkPath path = random_walk(rng, start, 2);
    if (path.edge_at(1) == target) ++hits_t1;
    if (path.edge_at(2) == target) ++hits_t2;
  }
  double sigma = std::sqrt(0.25 * 0.75 / trials);
  CHECK(std::abs(hits_t1 / double(trials) - 0.25) < 3 * sigma);
  CHECK(std::abs(hits_t2 / double(trials) - 0.25) < 3 * sigma);
}

TEST_CASE("from_index validates its range") {
  CHECK(Point::from_index(63, (uint64_t{1} << 63) - 1).weight() == 63);
  CHECK_THROWS_AS(Point::from_index(63, uint64_t{1} << 63), std::invalid_argument);
  CHECK_THROWS_AS(Point::from_index(3, 8), std::invalid_argument);
  CHECK_THROWS_AS(Point::from_index(64, 0), std::invalid_argument);
  CHECK(Point::from_index(3, 7).index() == 7);
}

TEST_CASE("points above 64 coordinates behave") {
  Point p(130);
  p.set_bit(1, true);
  p.set_bit(64, true);
  p.set_bit(65, true);
  p.set_bit(130, true);
  CHECK(p.weight() == 4);
  CHECK(p.bit(64));
  CHECK_FALSE(p.bit(63));
  Point q = flip(p, 130);
  CHECK(q.weight() == 3);
  CHECK(precedes(q, p));
}

TEST_CASE("rng below is in range and covers values") {
  RngStream rng = RngStream::from_seed(3);
  std::set<uint64_t> seen;
  for (int t = 0; t < 10000; ++t) {
    uint64_t v = rng.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}
