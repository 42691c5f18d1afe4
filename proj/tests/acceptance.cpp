// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "vmdp/cli.hpp"
#include "vmdp/error.hpp"

using namespace vmdp;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, const std::string& title, bool ok, const std::string& detail, double seconds) {
  std::printf("[%s] %2d %s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Ranks of A are recorded for every model the suite generates (criterion 10).
struct RankLog {
  int models = 0;
  int certified = 0;
  int lu_agrees = 0;
  void add(const CanonicalProgram& cp) {
    ++models;
    if (certify_full_rank(cp)) ++certified;
    if (Eigen::FullPivLU<Eigen::MatrixXd>(cp.dense_A()).rank() == cp.rows()) ++lu_agrees;
  }
} ranks;

// Shared with criterion 6.
struct Instance {
  Model model;
  OracleResult oracle;
};
std::vector<Instance> oracle_instances;

void criterion1() {
  const auto start = Clock::now();
  const CanonicalProgram cp(support::design_example());
  ranks.add(cp);
  const auto result = enumerate_efficient(cp);
  const double seconds = since(start);

  std::set<ActionMap> expected;
  for (const auto& row : support::design_efficient_set()) expected.insert(support::design_map(cp.layout(), row.pi1, row.pi2));
  bool ok = result.efficient.size() == 10;
  double worst = 0.0;
  std::set<ActionMap> found;
  for (const auto& v : result.efficient) {
    found.insert(v.actions);
    for (const auto& row : support::design_efficient_set())
      if (support::design_map(cp.layout(), row.pi1, row.pi2) == v.actions)
        for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(v.value[i] - row.value[static_cast<std::size_t>(i)]));
  }
  ok = ok && found == expected && worst <= 0.02 && seconds < 1.0;
  verdict(1, "Design example efficient set", ok,
          std::to_string(result.efficient.size()) + " policies, action maps " +
              (found == expected ? "match" : "differ") + ", max value deviation " + num(worst),
          seconds);
}

void criterion2() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  bool ok = true;
  std::size_t total_vertices = 0;
  std::string detail;
  for (int i = 0; i < 20; ++i) {
    RandomModelShape shape;
    const CanonicalProgram cp(random_model(shape, rng));
    ranks.add(cp);
    if (!cp.process_regular()) {
      ok = false;
      detail = "generated model is not regular";
      break;
    }
    std::set<std::vector<long long>> distinct;
    std::uint64_t maps = 0;
    bool nondegenerate = true;
    for (const auto& map : enumerate_regular_bases(cp)) {
      ++maps;
      const auto x = regular_basis_solve(cp, map);
      int positive = 0;
      std::vector<long long> key;
      for (double c : x.coords()) {
        if (c > 1e-10) ++positive;
        key.push_back(std::llround(c * 1e9));
      }
      nondegenerate = nondegenerate && positive == cp.rows();
      distinct.insert(std::move(key));
    }
    const auto expected = cp.layout().deterministic_policy_count();
    total_vertices += distinct.size();
    if (maps != expected || distinct.size() != expected || !nondegenerate) {
      ok = false;
      detail = "model " + std::to_string(i) + ": " + std::to_string(distinct.size()) + " distinct vertices, expected " +
               std::to_string(expected);
      break;
    }
  }
  const double seconds = since(start);
  if (ok) detail = "20 models, " + std::to_string(total_vertices) + " vertices, all distinct and non-degenerate";
  verdict(2, "Vertex-count law", ok && seconds < 5.0, detail, seconds);
}

// Value vectors of two efficient sets agree as multisets within tol.
bool same_values(std::vector<Eigen::VectorXd> a, std::vector<Eigen::VectorXd> b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<char> used(b.size(), 0);
  for (const auto& v : a) {
    bool hit = false;
    for (std::size_t j = 0; j < b.size() && !hit; ++j)
      if (!used[j] && (b[j] - v).lpNorm<Eigen::Infinity>() <= tol) used[j] = hit = true;
    if (!hit) return false;
  }
  return true;
}

void criterion3() {
  const auto start = Clock::now();
  std::mt19937_64 rng(777);
  int agree = 0;
  int degenerate_instances = 0;
  std::string first_failure;
  for (int i = 0; i < 200; ++i) {
    RandomModelShape shape;
    shape.num_objectives = 2 + i % 2;
    shape.sparsity = (i / 2) % 2 ? 0.6 : 0.0;  // half the instances have sparse transitions
    Model m = random_model(shape, rng);
    const CanonicalProgram cp(m);
    ranks.add(cp);
    if (!cp.process_regular()) ++degenerate_instances;
    const auto result = enumerate_efficient(cp);
    auto oracle = brute_force_oracle(m);

    std::vector<Eigen::VectorXd> mine, theirs;
    for (const auto& v : result.efficient) mine.push_back(v.value);
    for (const auto* e : oracle.efficient()) theirs.push_back(e->value);
    if (same_values(mine, theirs, 1e-6)) {
      ++agree;
    } else if (first_failure.empty()) {
      first_failure = "; instance " + std::to_string(i) + ": " + std::to_string(mine.size()) + " vs oracle " +
                      std::to_string(theirs.size());
    }
    oracle_instances.push_back({std::move(m), std::move(oracle)});
  }
  const double seconds = since(start);
  verdict(3, "Oracle equivalence", agree == 200 && seconds < 60.0,
          std::to_string(agree) + "/200 instances agree (" + std::to_string(degenerate_instances) +
              " non-regular)" + first_failure,
          seconds);
}

void criterion4_5() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4242);
  double worst_constraint = 0.0, worst_roundtrip = 0.0, worst_inverse = 0.0, worst_value = 0.0;
  int samples = 0, mixtures = 0;
  for (int i = 0; i < 20; ++i) {
    RandomModelShape shape;
    shape.num_objectives = 2 + i % 2;
    shape.sparsity = i % 2 ? 0.5 : 0.0;
    const Model m = random_model(shape, rng);
    const CanonicalProgram cp(m);
    ranks.add(cp);
    const Layout& L = m.layout();

    for (int j = 0; j < 100; ++j, ++samples) {
      const Policy pi = random_policy(L, rng);
      const auto x = policy_frequencies(m, pi);
      // (a)-(c) as A x = b, plus total probability and sign.
      double residual = (cp.A() * x.coords() - cp.b()).lpNorm<Eigen::Infinity>();
      double terminal = 0.0;
      for (int s = 0; s < L.num_states(); ++s) terminal += x.terminal(s);
      residual = std::max({residual, std::abs(terminal - 1.0), -x.coords().minCoeff()});
      worst_constraint = std::max(worst_constraint, residual);

      const Policy back = frequencies_to_policy(m, x);
      const Policy reg = regularize(m, pi);
      const auto mu = state_marginals(m, pi);
      for (int t = 0; t < L.num_decision_epochs(); ++t)
        for (int s = 0; s < L.num_states(); ++s) {
          if (mu[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] < kReachabilityThreshold) continue;
          for (int a = 0; a < L.num_actions(s); ++a)
            worst_roundtrip = std::max(worst_roundtrip, std::abs(back.prob(t, s, a) - reg.prob(t, s, a)));
        }

      worst_value = std::max(worst_value,
                             (cp.C() * x.coords() - evaluate_policy(m, pi).aggregate).lpNorm<Eigen::Infinity>());
    }

    // Convex mixtures of vertices.
    std::uniform_int_distribution<int> parts(2, 4);
    std::exponential_distribution<double> expo(1.0);
    for (int j = 0; j < 5; ++j, ++mixtures) {
      const int n = parts(rng);
      Eigen::VectorXd x = Eigen::VectorXd::Zero(cp.cols());
      double total = 0.0;
      std::vector<double> w(static_cast<std::size_t>(n));
      for (auto& v : w) total += (v = expo(rng));
      for (int p = 0; p < n; ++p)
        x += (w[static_cast<std::size_t>(p)] / total) * regular_basis_solve(cp, random_action_map(L, rng)).coords();
      const FrequencyVector fx(L, x);
      const auto again = policy_frequencies(m, frequencies_to_policy(m, fx));
      worst_inverse = std::max(worst_inverse, (again.coords() - x).lpNorm<Eigen::Infinity>());
    }
  }
  const double seconds = since(start);
  const bool ok4 = worst_constraint <= 1e-9 && worst_roundtrip <= 1e-9 && worst_inverse <= 1e-9;
  verdict(4, "Bijection round trips", ok4,
          std::to_string(samples) + " policies, " + std::to_string(mixtures) + " mixtures; max residual " +
              num(worst_constraint) + ", policy round trip " + num(worst_roundtrip) + ", frequency round trip " +
              num(worst_inverse),
          seconds);
  verdict(5, "Value identity", worst_value <= 1e-9,
          std::to_string(samples) + " policies, max |Cx - v| = " + num(worst_value), seconds);
}

void criterion6() {
  const auto start = Clock::now();
  std::size_t vertices = 0, mismatches = 0;
  for (const auto& inst : oracle_instances) {
    const CanonicalProgram cp(inst.model);
    for (const auto& entry : inst.oracle.vertices) {
      ++vertices;
      if (efficiency_test(cp, make_vertex(cp, entry.actions)) != entry.efficient) ++mismatches;
    }
  }
  const double seconds = since(start);
  verdict(6, "Efficiency-test soundness", mismatches == 0 && !oracle_instances.empty(),
          std::to_string(vertices) + " vertices over " + std::to_string(oracle_instances.size()) +
              " instances, " + std::to_string(mismatches) + " disagreements",
          seconds);
}

void criterion7_8() {
  const auto start = Clock::now();
  const CanonicalProgram cp(support::design_example());
  const auto result = enumerate_efficient(cp);
  bool ok = !result.efficient.empty();
  double worst_gap = 0.0, worst_kkt = 0.0, min_weight = 1.0;
  for (const auto& v : result.efficient) {
    const auto w = recover_weights(cp, v);
    if (!w) {
      ok = false;
      continue;
    }
    min_weight = std::min(min_weight, w->weights.minCoeff());
    worst_gap = std::max(worst_gap, std::abs(w->resolved_optimum - w->scalarized_value));
    // KKT inequality recomputed from scratch: A_N' A_B^{-T} (p'C)_B - (p'C)_N >= 0.
    const Eigen::VectorXd c = cp.C().transpose() * w->weights;
    Eigen::MatrixXd B(cp.rows(), cp.rows());
    Eigen::VectorXd cB(cp.rows());
    for (int i = 0; i < cp.rows(); ++i) {
      B.col(i) = cp.dense_A().col(v.basis[static_cast<std::size_t>(i)]);
      cB[i] = c[v.basis[static_cast<std::size_t>(i)]];
    }
    const Eigen::VectorXd y = B.transpose().fullPivLu().solve(cB);
    const Eigen::VectorXd slack = cp.dense_A().transpose() * y - c;
    worst_kkt = std::max(worst_kkt, std::max(0.0, -slack.minCoeff()));
  }
  ok = ok && min_weight > 0.0 && worst_gap <= 1e-8 && worst_kkt <= 1e-8;
  verdict(7, "Weight recovery", ok,
          std::to_string(result.efficient.size()) + " vertices, min weight " + num(min_weight) + ", re-solve gap " +
              num(worst_gap) + ", KKT violation " + num(worst_kkt),
          since(start));

  const auto start8 = Clock::now();
  int non_stationary = 0, twins = 0;
  for (const auto& v : result.efficient) {
    ActionMap swapped = v.actions;
    for (int s = 0; s < 2; ++s) std::swap(swapped.at(0, s), swapped.at(1, s));
    if (swapped == v.actions) continue;
    ++non_stationary;
    for (const auto& u : result.efficient)
      if (u.actions == swapped && (u.value - v.value).lpNorm<Eigen::Infinity>() <= 1e-9) ++twins;
  }
  verdict(8, "Epoch-swap symmetry", non_stationary > 0 && twins == non_stationary,
          std::to_string(twins) + "/" + std::to_string(non_stationary) + " non-stationary policies have their twin",
          since(start8));
}

void criterion9() {
  const auto start = Clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"bench", "--group", "5,5", "--group", "25,25", "--group", "100,100", "--rho", "0.7",
                             "--count", "100", "--seed", "1", "--format", "json"},
                            out, err);
  const double seconds = since(start);
  if (code != 0) {
    verdict(9, "Group-size trend", false, "bench exited with " + std::to_string(code) + ": " + err.str(), seconds);
    return;
  }
  const auto j = nlohmann::json::parse(out.str());
  std::vector<double> means;
  std::string detail = "means";
  for (const auto& g : j["groups"]) {
    means.push_back(g["mean"].get<double>());
    detail += " (" + std::to_string(g["k1"].get<int>()) + "," + std::to_string(g["k2"].get<int>()) + ")=" +
              num(g["mean"].get<double>()) + " sd " + num(g["sd"].get<double>());
  }
  const bool ok = means.size() == 3 && means[0] < means[1] && means[1] < means[2] && means[0] >= 8.0 &&
                  means[0] <= 17.0 && seconds < 600.0;
  verdict(9, "Group-size trend", ok, detail, seconds);
}

void criterion10() {
  verdict(10, "Rank lemma", ranks.models > 0 && ranks.certified == ranks.models && ranks.lu_agrees == ranks.models,
          std::to_string(ranks.certified) + "/" + std::to_string(ranks.models) +
              " models certified by a unit triangular basis (LU rank agrees on " + std::to_string(ranks.lu_agrees) +
              ")",
          0.0);
}

template <class F>
void guarded(int id, const char* title, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    verdict(id, title, false, std::string("exception: ") + e.what(), 0.0);
  }
}

}  // namespace

int main() {
  guarded(1, "Design example efficient set", criterion1);
  guarded(2, "Vertex-count law", criterion2);
  guarded(3, "Oracle equivalence", criterion3);
  guarded(4, "Bijection round trips", criterion4_5);
  guarded(6, "Efficiency-test soundness", criterion6);
  guarded(7, "Weight recovery", criterion7_8);
  guarded(9, "Group-size trend", criterion9);
  guarded(10, "Rank lemma", criterion10);
  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
