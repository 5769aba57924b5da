#include "mono/hypercube.hpp"

namespace mono {

Point flip(const Point& x, int coord) {
  Point y = x;
  y.toggle_bit(coord);  // range-checked
  return y;
}

bool precedes(const Point& x, const Point& y) {
  if (x.dimension() != y.dimension())
    throw std::invalid_argument("precedes: dimension mismatch");
  bool strict = false;
  for (int i = 0; i < x.word_count(); ++i) {
    uint64_t xw = x.words()[i], yw = y.words()[i];
    if (xw & ~yw) return false;  // some coordinate of x exceeds y
    if (xw != yw) strict = true;
  }
  return strict;
}

Point sample_point(RngStream& rng, int n) {
  Point p(n);
  int nwords = p.word_count();
  for (int i = 0; i < nwords; ++i) p.words()[i] = rng.next_u64();
  int rem = n & 63;
  if (rem != 0) p.words()[nwords - 1] &= (uint64_t{1} << rem) - 1;
  return p;
}

WalkLength sample_walk_length(RngStream& rng, int n) {
  if (n < 1) throw std::invalid_argument("sample_walk_length: n must be >= 1");
  int kmax = ceil_log2(static_cast<uint64_t>(n));
  int k = static_cast<int>(rng.below(static_cast<uint64_t>(kmax) + 1));
  return {k, uint64_t{1} << k};
}

WalkPath random_walk(RngStream& rng, const Point& start, uint64_t ell) {
  WalkPath path;
  path.start = start;
  path.steps.reserve(ell);
  auto n = static_cast<uint64_t>(start.dimension());
  for (uint64_t t = 0; t < ell; ++t)
    path.steps.push_back(static_cast<int>(rng.below(n)) + 1);
  return path;
}

}  // namespace mono
