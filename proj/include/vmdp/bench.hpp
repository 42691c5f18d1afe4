#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "vmdp/report.hpp"

namespace vmdp {

/// Random design instances grouped by (k1, k2): instance i uses seed + i.
struct BenchGroupResult {
  int k1 = 0;
  int k2 = 0;
  double rho = 0.0;
  int count = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> efficient_counts;  // |Pi^ED| per instance
  double mean = 0.0;
  double sd = 0.0;                            // sample sd, 0 for a single instance
  // Per-instance cost/reliability correlation of each component: mean and sd.
  double rho1_mean = 0.0, rho1_sd = 0.0;
  double rho2_mean = 0.0, rho2_sd = 0.0;
};

/// Instances are solved concurrently; results do not depend on the thread
/// count. The regular-basis guard is bypassed (large groups exceed it).
BenchGroupResult run_bench_group(int k1, int k2, double rho, int count, std::uint64_t seed);

/// Mean and sample standard deviation, skipping NaNs.
std::pair<double, double> mean_sd(const std::vector<double>& xs);

void write_bench(const std::vector<BenchGroupResult>& groups, report::Format format, std::ostream& out);

}  // namespace vmdp
