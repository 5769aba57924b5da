#pragma once

#include <cmath>
#include <cstdint>

namespace mono {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for a binomial proportion (default z for 95%).
/// Preferred over the normal approximation because many cells have success
/// counts at or near zero.
inline WilsonInterval wilson_interval(uint64_t successes, uint64_t trials,
                                      double z = 1.9599639845400545) {
  if (trials == 0) return {0.0, 1.0};
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = p + z2 / (2.0 * n);
  double margin = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  double low = (center - margin) / denom;
  double high = (center + margin) / denom;
  if (successes == 0 || low < 0.0) low = 0.0;  // exact at the boundary
  if (successes == trials || high > 1.0) high = 1.0;
  return {low, high};
}

/// Standard error of a binomial rate estimate at probability p.
inline double binomial_stderr(double p, uint64_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace mono
