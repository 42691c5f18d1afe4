#include "vmdp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vmdp/error.hpp"

namespace vmdp {

ActionMap::ActionMap(const Layout& layout)
    : num_states_(layout.num_states()),
      choices_(static_cast<std::size_t>(layout.num_decision_epochs() * layout.num_states()), 0) {}

ActionMap::ActionMap(const Layout& layout, std::vector<int> choices)
    : num_states_(layout.num_states()), choices_(std::move(choices)) {
  if (choices_.size() != static_cast<std::size_t>(layout.num_decision_epochs() * layout.num_states()))
    throw ModelError("action map has the wrong size");
  for (int t = 0; t < layout.num_decision_epochs(); ++t)
    for (int s = 0; s < layout.num_states(); ++s)
      if (at(t, s) < 0 || at(t, s) >= layout.num_actions(s))
        throw ModelError("action map selects an invalid action at (t=" + std::to_string(t) +
                         ", s=" + std::to_string(s) + ")");
}

std::size_t ActionMapHash::operator()(const ActionMap& m) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int c : m.choices()) h = (h ^ static_cast<std::size_t>(c)) * 1099511628211ull;
  return h;
}

Policy::Policy(const Layout& layout)
    : layout_(layout),
      q_(static_cast<std::size_t>(layout.num_decision_epochs() * layout.total_actions()), 0.0) {}

Policy Policy::deterministic(const Layout& layout, const ActionMap& actions) {
  Policy pi(layout);
  for (int t = 0; t < layout.num_decision_epochs(); ++t)
    for (int s = 0; s < layout.num_states(); ++s) pi.prob(t, s, actions.at(t, s)) = 1.0;
  return pi;
}

bool Policy::is_deterministic() const { return action_map().has_value(); }

std::optional<ActionMap> Policy::action_map() const {
  ActionMap map(layout_);
  for (int t = 0; t < layout_.num_decision_epochs(); ++t) {
    for (int s = 0; s < layout_.num_states(); ++s) {
      int chosen = -1;
      for (int a = 0; a < layout_.num_actions(s); ++a) {
        const double q = prob(t, s, a);
        if (q == 1.0 && chosen < 0) {
          chosen = a;
        } else if (q != 0.0) {
          return std::nullopt;
        }
      }
      if (chosen < 0) return std::nullopt;
      map.at(t, s) = chosen;
    }
  }
  return map;
}

ValidationReport validate_policy(const Policy& pi, double tolerance) {
  ValidationReport report;
  const auto& L = pi.layout();
  for (int t = 0; t < L.num_decision_epochs(); ++t) {
    for (int s = 0; s < L.num_states(); ++s) {
      double sum = 0.0;
      for (double q : pi.row(t, s)) {
        if (!(q >= 0.0 && q <= 1.0)) {
          report.violations.push_back("q(.|s=" + std::to_string(s) + ", t=" + std::to_string(t) +
                                      ") has an entry outside [0, 1]");
          break;
        }
        sum += q;
      }
      if (!(std::abs(sum - 1.0) <= tolerance)) {
        std::ostringstream os;
        os.precision(12);
        os << "q(.|s=" << s << ", t=" << t << ") sums to " << sum;
        report.violations.push_back(os.str());
      }
    }
  }
  return report;
}

FrequencyVector::FrequencyVector(const Layout& layout)
    : layout_(layout), x_(Eigen::VectorXd::Zero(layout.num_columns())) {}

FrequencyVector::FrequencyVector(const Layout& layout, Eigen::VectorXd coords)
    : layout_(layout), x_(std::move(coords)) {
  if (x_.size() != layout_.num_columns()) throw ModelError("frequency vector has the wrong length");
}

double FrequencyVector::state_mass(int t, int s) const {
  if (t == layout_.horizon() - 1) return terminal(s);
  return x_.segment(layout_.column(t, s, 0), layout_.num_actions(s)).sum();
}

bool same_vertex(const FrequencyVector& x, const FrequencyVector& y, double tol) {
  return (x.coords() - y.coords()).lpNorm<Eigen::Infinity>() < tol;
}

namespace {

void check_dimensions(const Model& m, const Layout& other, const char* what) {
  if (!(m.layout() == other)) throw ModelError(std::string(what) + " does not match the model dimensions");
}

// sum_{s,a} p_t(j|s,a) x_t(s,a) for every j.
std::vector<double> propagate(const Model& m, const FrequencyVector& x, int t) {
  std::vector<double> next(static_cast<std::size_t>(m.num_states()), 0.0);
  for (int s = 0; s < m.num_states(); ++s)
    for (int a = 0; a < m.num_actions(s); ++a) {
      const double mass = x.at(t, s, a);
      if (mass == 0.0) continue;
      auto row = m.transition_row(t, s, a);
      for (std::size_t j = 0; j < next.size(); ++j) next[j] += row[j] * mass;
    }
  return next;
}

}  // namespace

double frequency_residual(const Model& m, const FrequencyVector& x) {
  check_dimensions(m, x.layout(), "frequency vector");
  const int S = m.num_states();
  const int last = m.horizon() - 1;
  double worst = std::max(0.0, -x.coords().minCoeff());
  for (int j = 0; j < S; ++j)
    worst = std::max(worst, std::abs(x.state_mass(0, j) - m.alpha()[static_cast<std::size_t>(j)]));
  for (int t = 0; t + 1 <= last; ++t) {
    auto inflow = propagate(m, x, t);
    for (int j = 0; j < S; ++j)
      worst = std::max(worst, std::abs(x.state_mass(t + 1, j) - inflow[static_cast<std::size_t>(j)]));
  }
  double total = 0.0;
  for (int j = 0; j < S; ++j) total += x.terminal(j);
  return std::max(worst, std::abs(total - 1.0));
}

PolicyValue evaluate_policy(const Model& m, const Policy& pi) {
  check_dimensions(m, pi.layout(), "policy");
  const int S = m.num_states();
  const int k = m.num_objectives();
  std::vector<Eigen::VectorXd> u(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) u[static_cast<std::size_t>(s)] = Eigen::Map<const Eigen::VectorXd>(m.terminal_reward(s).data(), k);

  for (int t = m.horizon() - 2; t >= 0; --t) {
    std::vector<Eigen::VectorXd> prev(static_cast<std::size_t>(S), Eigen::VectorXd::Zero(k));
    for (int s = 0; s < S; ++s) {
      auto& acc = prev[static_cast<std::size_t>(s)];
      for (int a = 0; a < m.num_actions(s); ++a) {
        const double q = pi.prob(t, s, a);
        if (q == 0.0) continue;
        Eigen::VectorXd backup = Eigen::Map<const Eigen::VectorXd>(m.reward(t, s, a).data(), k);
        for (int j = 0; j < S; ++j) backup += m.transition(t, s, a, j) * u[static_cast<std::size_t>(j)];
        acc += q * backup;
      }
    }
    u = std::move(prev);
  }

  PolicyValue out{u, Eigen::VectorXd::Zero(k)};
  for (int s = 0; s < S; ++s) out.aggregate += m.alpha()[static_cast<std::size_t>(s)] * u[static_cast<std::size_t>(s)];
  return out;
}

std::vector<std::vector<double>> state_marginals(const Model& m, const Policy& pi) {
  check_dimensions(m, pi.layout(), "policy");
  const auto S = static_cast<std::size_t>(m.num_states());
  std::vector<std::vector<double>> mu(static_cast<std::size_t>(m.horizon()), std::vector<double>(S, 0.0));
  mu[0].assign(m.alpha().begin(), m.alpha().end());
  for (int t = 0; t + 1 < m.horizon(); ++t) {
    auto& next = mu[static_cast<std::size_t>(t + 1)];
    for (int s = 0; s < m.num_states(); ++s) {
      const double ms = mu[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
      if (ms == 0.0) continue;
      for (int a = 0; a < m.num_actions(s); ++a) {
        const double mass = ms * pi.prob(t, s, a);
        if (mass == 0.0) continue;
        auto row = m.transition_row(t, s, a);
        for (std::size_t j = 0; j < S; ++j) next[j] += row[j] * mass;
      }
    }
  }
  return mu;
}

FrequencyVector policy_frequencies(const Model& m, const Policy& pi) {
  const auto mu = state_marginals(m, pi);
  FrequencyVector x(m.layout());
  for (int t = 0; t + 1 < m.horizon(); ++t)
    for (int s = 0; s < m.num_states(); ++s)
      for (int a = 0; a < m.num_actions(s); ++a)
        x.at(t, s, a) = mu[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] * pi.prob(t, s, a);
  for (int s = 0; s < m.num_states(); ++s)
    x.terminal(s) = mu.back()[static_cast<std::size_t>(s)];
  return x;
}

Policy frequencies_to_policy(const Model& m, const FrequencyVector& x, double tolerance) {
  const double residual = frequency_residual(m, x);
  if (!(residual <= tolerance)) {
    std::ostringstream os;
    os << "not a state-action frequency vector (constraint residual " << residual << ")";
    throw ModelError(os.str());
  }
  Policy pi(m.layout());
  for (int t = 0; t + 1 < m.horizon(); ++t)
    for (int s = 0; s < m.num_states(); ++s) {
      const double mass = x.state_mass(t, s);
      if (mass > kReachabilityThreshold) {
        for (int a = 0; a < m.num_actions(s); ++a) pi.prob(t, s, a) = std::max(0.0, x.at(t, s, a)) / mass;
      } else {
        pi.prob(t, s, 0) = 1.0;
      }
    }
  return pi;
}

Policy regularize(const Model& m, const Policy& pi) {
  const auto mu = state_marginals(m, pi);
  Policy out = pi;
  for (int t = 0; t + 1 < m.horizon(); ++t)
    for (int s = 0; s < m.num_states(); ++s) {
      if (mu[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] >= kReachabilityThreshold) continue;
      auto row = out.row(t, s);
      std::fill(row.begin(), row.end(), 0.0);
      row[0] = 1.0;
    }
  return out;
}

RegularityReport regularity_report(const Model& m) {
  RegularityReport report;
  const int S = m.num_states();
  for (int t = 1; t < m.horizon(); ++t) {
    for (int s = 0; s < S; ++s) {
      bool every_predecessor_can_avoid = true;
      bool no_arc = true;
      std::vector<int> avoiding(static_cast<std::size_t>(S), -1);
      for (int sp = 0; sp < S; ++sp) {
        for (int a = 0; a < m.num_actions(sp); ++a) {
          const double p = m.transition(t - 1, sp, a, s);
          if (p > 0.0) no_arc = false;
          if (p == 0.0 && avoiding[static_cast<std::size_t>(sp)] < 0) avoiding[static_cast<std::size_t>(sp)] = a;
        }
        if (avoiding[static_cast<std::size_t>(sp)] < 0) every_predecessor_can_avoid = false;
      }
      if (no_arc && !report.all_policy_witness) report.all_policy_witness = StateEpoch{s, t};
      if (every_predecessor_can_avoid) {
        report.regular = false;
        if (!report.some_policy_witness)
          report.some_policy_witness = SomePolicyWitness{{s, t}, std::move(avoiding)};
      }
    }
  }
  return report;
}

}  // namespace vmdp
