#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracnls {

struct SelftestOptions {
  /// Dyadic ratio of the partition under test. Anything but 2 breaks the
  /// telescoping identity, which the norms suite must detect.
  double partition_ratio = 2.0;
  std::uint64_t seed = 12345;
};

struct SuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  std::vector<std::string> failures;
};

/// Suites: norms, propagator, pointwise, plane_wave.
std::vector<SuiteResult> run_selftest(const SelftestOptions& options = {});

}  // namespace fracnls
