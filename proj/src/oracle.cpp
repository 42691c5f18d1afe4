#include <algorithm>
#include <cmath>
#include <map>

#include "vmdp/detail/parallel.hpp"
#include "vmdp/error.hpp"
#include "vmdp/pareto.hpp"

namespace vmdp {

namespace {

struct Evaluated {
  FrequencyVector x;
  Eigen::VectorXd value;
};

OracleResult run_oracle(const Model& m, bool parallel) {
  const Layout& L = m.layout();
  const auto count = L.deterministic_policy_count();
  if (count > kOracleLimit)
    throw ModelError("oracle needs " + std::to_string(count) + " policy evaluations (limit " +
                     std::to_string(kOracleLimit) + ")");

  const auto total = static_cast<long>(count);
  std::vector<std::optional<Evaluated>> evaluated(static_cast<std::size_t>(total));
  detail::ExceptionSlot failure;
#pragma omp parallel for schedule(static) if (parallel)
  for (long i = 0; i < total; ++i)
    failure.run([&] {
      const auto pi = Policy::deterministic(L, action_map_from_index(L, static_cast<std::uint64_t>(i)));
      evaluated[static_cast<std::size_t>(i)].emplace(
          Evaluated{policy_frequencies(m, pi), evaluate_policy(m, pi).aggregate});
    });
  failure.rethrow();

  // Equivalent policies share a frequency vector; keep the first of each class.
  OracleResult out;
  out.policies_evaluated = static_cast<std::size_t>(total);
  std::map<std::vector<long long>, std::size_t> classes;
  for (long i = 0; i < total; ++i) {
    auto& e = *evaluated[static_cast<std::size_t>(i)];
    std::vector<long long> key;
    key.reserve(static_cast<std::size_t>(e.x.coords().size()));
    for (double c : e.x.coords()) key.push_back(std::llround(c * 1e8));
    auto [it, inserted] = classes.emplace(std::move(key), out.vertices.size());
    if (inserted) {
      out.vertices.push_back(OracleEntry{action_map_from_index(L, static_cast<std::uint64_t>(i)), std::move(e.x),
                                         std::move(e.value), 1, false});
    } else {
      ++out.vertices[it->second].equivalent_policies;
    }
  }

  // A point dominated by another deterministic value is hull-dominated too.
  // Scanning in lexicographically decreasing order, any dominator of a point
  // comes before it, so comparing against the survivors so far suffices. The
  // hull of the survivors dominates everything the full hull does.
  std::vector<long> order(out.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<long>(i);
  std::stable_sort(order.begin(), order.end(), [&](long a, long b) {
    const auto& va = out.vertices[static_cast<std::size_t>(a)].value;
    const auto& vb = out.vertices[static_cast<std::size_t>(b)].value;
    return std::lexicographical_compare(vb.begin(), vb.end(), va.begin(), va.end());
  });
  std::vector<Eigen::VectorXd> hull;
  std::vector<long> candidates;
  for (long i : order) {
    const auto& v = out.vertices[static_cast<std::size_t>(i)].value;
    bool dominated = false;
    for (const auto& h : hull)
      if (dominates(h, v)) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    hull.push_back(v);
    candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end());
  const auto nc = static_cast<long>(candidates.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (long c = 0; c < nc; ++c)
    failure.run([&] {
      auto& entry = out.vertices[static_cast<std::size_t>(candidates[static_cast<std::size_t>(c)])];
      entry.efficient = hull_dominance_gap(hull, entry.value) <= 1e-9;
    });
  failure.rethrow();
  return out;
}

}  // namespace

std::vector<const OracleEntry*> OracleResult::efficient() const {
  std::vector<const OracleEntry*> out;
  for (const auto& v : vertices)
    if (v.efficient) out.push_back(&v);
  return out;
}

OracleResult brute_force_oracle(const Model& m) { return run_oracle(m, true); }

OracleResult brute_force_oracle_serial(const Model& m) { return run_oracle(m, false); }

}  // namespace vmdp
