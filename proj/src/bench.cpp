#include "vmdp/bench.hpp"

#include <cmath>
#include <ostream>

#include "vmdp/detail/parallel.hpp"
#include "vmdp/error.hpp"
#include "vmdp/pareto.hpp"

namespace vmdp {

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : xs)
    if (!std::isnan(x)) {
      sum += x;
      ++n;
    }
  if (n == 0) return {std::nan(""), std::nan("")};
  const double mean = sum / static_cast<double>(n);
  if (n == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs)
    if (!std::isnan(x)) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(n - 1))};
}

BenchGroupResult run_bench_group(int k1, int k2, double rho, int count, std::uint64_t seed) {
  if (count < 1) throw ModelError("bench count must be at least 1");
  BenchGroupResult g{k1, k2, rho, count, seed, {}, 0, 0, 0, 0, 0, 0};
  g.efficient_counts.assign(static_cast<std::size_t>(count), 0);
  std::vector<double> rho1(static_cast<std::size_t>(count)), rho2(static_cast<std::size_t>(count));

  detail::ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) failure.run([&] {
    const auto idx = static_cast<std::size_t>(i);
    const auto d = generate_random_instance(k1, k2, rho, seed + static_cast<std::uint64_t>(i));
    for (int s = 0; s < 2; ++s) {
      std::vector<double> c, p;
      for (const auto& alt : d.component(s)) {
        c.push_back(alt.cost);
        p.push_back(alt.reliability);
      }
      (s == 0 ? rho1 : rho2)[idx] = sample_correlation(c, p);
    }
    const CanonicalProgram cp(build_design_model(d));
    g.efficient_counts[idx] = enumerate_efficient_serial(cp, {.force = true}).efficient.size();
  });
  failure.rethrow();

  std::vector<double> sizes(g.efficient_counts.begin(), g.efficient_counts.end());
  std::tie(g.mean, g.sd) = mean_sd(sizes);
  std::tie(g.rho1_mean, g.rho1_sd) = mean_sd(rho1);
  std::tie(g.rho2_mean, g.rho2_sd) = mean_sd(rho2);
  return g;
}

void write_bench(const std::vector<BenchGroupResult>& groups, report::Format format, std::ostream& out) {
  using report::fixed;
  if (format == report::Format::Json) {
    auto rows = nlohmann::json::array();
    for (const auto& g : groups)
      rows.push_back({{"k1", g.k1},
                      {"k2", g.k2},
                      {"rho", g.rho},
                      {"count", g.count},
                      {"seed", g.seed},
                      {"mean", g.mean},
                      {"sd", g.sd},
                      {"rho1_mean", g.rho1_mean},
                      {"rho1_sd", g.rho1_sd},
                      {"rho2_mean", g.rho2_mean},
                      {"rho2_sd", g.rho2_sd},
                      {"efficient_counts", g.efficient_counts}});
    out << nlohmann::json{{"groups", rows}}.dump(2) << '\n';
    return;
  }
  if (format == report::Format::Csv) {
    out << "group,k1,k2,rho,count,seed,rho1_mean,rho1_sd,rho2_mean,rho2_sd,mean,sd\n";
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const auto& g = groups[i];
      out << i + 1 << ',' << g.k1 << ',' << g.k2 << ',' << fixed(g.rho, 6) << ',' << g.count << ',' << g.seed << ','
          << fixed(g.rho1_mean, 6) << ',' << fixed(g.rho1_sd, 6) << ',' << fixed(g.rho2_mean, 6) << ','
          << fixed(g.rho2_sd, 6) << ',' << fixed(g.mean, 6) << ',' << fixed(g.sd, 6) << '\n';
    }
    return;
  }
  out << "| Group | k1 | rho1 | k2 | rho2 | efficient policies |\n|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    out << "| " << i + 1 << " | " << g.k1 << " | " << fixed(g.rho1_mean, 2) << " (" << fixed(g.rho1_sd, 2) << ") | "
        << g.k2 << " | " << fixed(g.rho2_mean, 2) << " (" << fixed(g.rho2_sd, 2) << ") | " << fixed(g.mean, 1)
        << " (" << fixed(g.sd, 1) << ") |\n";
  }
}

}  // namespace vmdp
