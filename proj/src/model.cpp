#include "vmdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "vmdp/error.hpp"

namespace vmdp {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

Model::Model(int num_states, int horizon, int num_objectives, std::vector<int> actions_per_state)
    : layout_(num_states, horizon, std::move(actions_per_state)), num_objectives_(num_objectives) {
  if (num_objectives_ < 1) throw ModelError("num_objectives must be positive");
  const auto columns = static_cast<std::size_t>(layout_.num_decision_epochs()) *
                       static_cast<std::size_t>(layout_.total_actions());
  const auto S = static_cast<std::size_t>(num_states);
  const auto k = static_cast<std::size_t>(num_objectives);
  transitions_.assign(columns * S, 0.0);
  rewards_.assign(columns * k, 0.0);
  terminal_rewards_.assign(S * k, 0.0);
  alpha_.assign(S, 1.0 / static_cast<double>(S));
}

ValidationReport validate_model(const Model& m, double tolerance) {
  ValidationReport report;
  auto& out = report.violations;
  const int S = m.num_states();

  double alpha_sum = 0.0;
  for (int s = 0; s < S; ++s) {
    const double a = m.alpha()[static_cast<std::size_t>(s)];
    if (!(a > 0.0)) out.push_back("alpha[" + std::to_string(s) + "] = " + num(a) + " is not positive");
    alpha_sum += a;
  }
  if (!(std::abs(alpha_sum - 1.0) <= tolerance))
    out.push_back("initial distribution sums to " + num(alpha_sum));

  bool some_choice = false;
  for (int s = 0; s < S; ++s) some_choice = some_choice || m.num_actions(s) >= 2;
  if (!some_choice) out.push_back("no state has two or more actions");

  for (int t = 0; t < m.horizon() - 1; ++t) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < m.num_actions(s); ++a) {
        const std::string where =
            "(t=" + std::to_string(t) + ", s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
        double row_sum = 0.0;
        for (int j = 0; j < S; ++j) {
          const double p = m.transition(t, s, a, j);
          if (!(p >= 0.0 && p <= 1.0))
            out.push_back("transition " + where + " to state " + std::to_string(j) + " is " + num(p) +
                          ", outside [0, 1]");
          row_sum += p;
        }
        if (!(std::abs(row_sum - 1.0) <= tolerance))
          out.push_back("transition row " + where + " sums to " + num(row_sum));
        for (double r : m.reward(t, s, a))
          if (!std::isfinite(r)) out.push_back("reward " + where + " is not finite");
      }
    }
  }
  for (int s = 0; s < S; ++s)
    for (double r : m.terminal_reward(s))
      if (!std::isfinite(r)) out.push_back("terminal reward of state " + std::to_string(s) + " is not finite");
  return report;
}

void require_valid(const Model& m, double tolerance) {
  auto report = validate_model(m, tolerance);
  if (report.ok()) return;
  std::string msg = "invalid model:";
  for (const auto& v : report.violations) msg += "\n  " + v;
  throw ModelError(msg);
}

Model build_design_model(const DesignInstance& d, std::optional<std::vector<double>> alpha) {
  if (d.component1.empty() || d.component2.empty())
    throw ModelError("each component needs at least one alternative");
  for (int s = 0; s < 2; ++s)
    for (std::size_t a = 0; a < d.component(s).size(); ++a)
      if (!(d.component(s)[a].reliability > 0.0))
        throw ModelError("component " + std::to_string(s + 1) + " alternative " + std::to_string(a + 1) +
                         " has non-positive reliability " + num(d.component(s)[a].reliability));

  Model m(2, 3, 2,
          {static_cast<int>(d.component1.size()), static_cast<int>(d.component2.size())});
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < m.num_actions(s); ++a) {
      const auto& alt = d.component(s)[static_cast<std::size_t>(a)];
      for (int t = 0; t < 2; ++t) {
        auto r = m.reward(t, s, a);
        r[0] = -alt.cost;
        r[1] = std::log(alt.reliability);
      }
      for (int j = 0; j < 2; ++j) {
        m.transition(0, s, a, j) = j == s ? 0.0 : 1.0;
        m.transition(1, s, a, j) = 0.5;
      }
    }
  }
  if (alpha) {
    if (alpha->size() != 2) throw ModelError("design alpha must have two entries");
    m.alpha()[0] = (*alpha)[0];
    m.alpha()[1] = (*alpha)[1];
  }
  return m;
}

DesignInstance generate_random_instance(int k1, int k2, double rho, std::uint64_t seed) {
  if (k1 < 1 || k2 < 1) throw ModelError("k1 and k2 must be at least 1");
  if (!(std::abs(rho) < 1.0)) throw ModelError("|rho| must be below 1");

  // Gaussian copula; 2 sin(pi rho / 6) turns the target rank correlation into
  // the latent normal correlation.
  const double r = 2.0 * std::sin(std::numbers::pi * rho / 6.0);
  const double r_perp = std::sqrt(1.0 - r * r);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto phi = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };

  DesignInstance d;
  for (int s = 0; s < 2; ++s) {
    auto& comp = s == 0 ? d.component1 : d.component2;
    const int k = s == 0 ? k1 : k2;
    comp.reserve(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) {
      const double z1 = normal(rng);
      const double z2 = r * z1 + r_perp * normal(rng);
      comp.push_back({phi(z1), std::clamp(phi(z2), 0.01, 1.0)});
    }
  }
  return d;
}

DesignInstance reference_design_instance() {
  return {
      {{0.70, 0.48}, {0.33, 0.21}, {0.83, 0.58}, {0.60, 0.81}, {0.29, 0.68}},
      {{0.48, 0.56}, {0.42, 0.79}, {0.39, 0.46}, {0.76, 0.38}, {0.98, 0.90}},
  };
}

double sample_correlation(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) return std::nan("");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace vmdp
