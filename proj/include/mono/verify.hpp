#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mono {

enum class VerifyLevel { Quick, Full };

struct CheckResult {
  std::string id;
  bool passed = false;
  std::string detail;
  double millis = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed = false;
};

/// Runs every registered invariant check. Quick: exhaustive checks at n <= 4
/// plus 1e5-trial Monte Carlo. Full: corpus sweeps up to n = 12 and 1e6-trial
/// estimates. Every check runs at both levels; failures are reported, never
/// skipped, and the coverage meta-check fails if a required identifier is
/// missing from the registry.
VerifyReport run_verification(VerifyLevel level, uint64_t seed,
                              std::ostream* progress = nullptr);

const std::vector<std::string>& required_check_ids();
std::vector<std::string> registered_check_ids();

}  // namespace mono
