#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vmdp/layout.hpp"
#include "vmdp/model.hpp"

namespace vmdp {

/// Forward marginals below this are treated as unreachable.
inline constexpr double kReachabilityThreshold = 1e-12;

/// One action per (state, decision epoch): the selection a_{st} behind a
/// deterministic policy or a regular basis.
class ActionMap {
 public:
  ActionMap() = default;
  explicit ActionMap(const Layout& layout);
  ActionMap(const Layout& layout, std::vector<int> choices);

  [[nodiscard]] int at(int t, int s) const { return choices_[index(t, s)]; }
  int& at(int t, int s) { return choices_[index(t, s)]; }
  [[nodiscard]] int num_states() const { return num_states_; }
  [[nodiscard]] int num_epochs() const {
    return num_states_ == 0 ? 0 : static_cast<int>(choices_.size()) / num_states_;
  }
  [[nodiscard]] std::span<const int> choices() const { return choices_; }

  friend bool operator==(const ActionMap&, const ActionMap&) = default;
  friend auto operator<=>(const ActionMap&, const ActionMap&) = default;

 private:
  [[nodiscard]] std::size_t index(int t, int s) const {
    return static_cast<std::size_t>(t * num_states_ + s);
  }
  int num_states_ = 0;
  std::vector<int> choices_;
};

struct ActionMapHash {
  std::size_t operator()(const ActionMap& m) const noexcept;
};

/// A Markov policy: q(a | s, t) for every decision epoch.
class Policy {
 public:
  explicit Policy(const Layout& layout);
  static Policy deterministic(const Layout& layout, const ActionMap& actions);

  [[nodiscard]] const Layout& layout() const { return layout_; }
  [[nodiscard]] double prob(int t, int s, int a) const {
    return q_[static_cast<std::size_t>(layout_.column(t, s, a))];
  }
  double& prob(int t, int s, int a) { return q_[static_cast<std::size_t>(layout_.column(t, s, a))]; }
  [[nodiscard]] std::span<const double> row(int t, int s) const {
    return {q_.data() + layout_.column(t, s, 0), static_cast<std::size_t>(layout_.num_actions(s))};
  }
  std::span<double> row(int t, int s) {
    return {q_.data() + layout_.column(t, s, 0), static_cast<std::size_t>(layout_.num_actions(s))};
  }

  /// True iff every (s, t) puts probability exactly 1 on one action.
  [[nodiscard]] bool is_deterministic() const;
  /// The selected actions when deterministic.
  [[nodiscard]] std::optional<ActionMap> action_map() const;

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  Layout layout_;
  std::vector<double> q_;
};

ValidationReport validate_policy(const Policy& pi, double tolerance = kDefaultModelTolerance);

/// State-action frequencies x_t(s,a) and terminal frequencies x_T(s), stored as
/// one vector in canonical column order (see Layout).
class FrequencyVector {
 public:
  explicit FrequencyVector(const Layout& layout);
  FrequencyVector(const Layout& layout, Eigen::VectorXd coords);

  [[nodiscard]] const Layout& layout() const { return layout_; }
  [[nodiscard]] double at(int t, int s, int a) const { return x_[layout_.column(t, s, a)]; }
  double& at(int t, int s, int a) { return x_[layout_.column(t, s, a)]; }
  [[nodiscard]] double terminal(int s) const { return x_[layout_.terminal_column(s)]; }
  double& terminal(int s) { return x_[layout_.terminal_column(s)]; }
  /// Sum over actions of x_t(s, .); for t = T-1 the terminal frequency.
  [[nodiscard]] double state_mass(int t, int s) const;

  [[nodiscard]] const Eigen::VectorXd& coords() const { return x_; }
  Eigen::VectorXd& coords() { return x_; }

 private:
  Layout layout_;
  Eigen::VectorXd x_;
};

/// Max-norm test used to decide whether two frequency vectors are one vertex.
bool same_vertex(const FrequencyVector& x, const FrequencyVector& y, double tol = 1e-8);

/// Largest violation of the balance constraints (initial, propagation,
/// terminal, total probability) and of non-negativity.
double frequency_residual(const Model& m, const FrequencyVector& x);

struct PolicyValue {
  std::vector<Eigen::VectorXd> per_state;  // v(s) = u_1(s)
  Eigen::VectorXd aggregate;               // sum_s alpha(s) v(s)
};

/// Backward recursion u_t(s) = sum_a q(a|s,t) [R_t(s,a) + sum_j p_t(j|s,a) u_{t+1}(j)].
PolicyValue evaluate_policy(const Model& m, const Policy& pi);

/// Forward state marginals mu_t(s), t = 0..T-1 (the last row is terminal).
std::vector<std::vector<double>> state_marginals(const Model& m, const Policy& pi);

/// Forward recursion x_t(s,a) = mu_t(s) q(a|s,t).
FrequencyVector policy_frequencies(const Model& m, const Policy& pi);

/// The regular policy with frequencies x: q = x_t(s,a) / sum_a' x_t(s,a'),
/// action 0 where the denominator vanishes. Throws ModelError when x violates
/// the balance constraints by more than `tolerance`.
Policy frequencies_to_policy(const Model& m, const FrequencyVector& x, double tolerance = 1e-9);

/// Put all mass on action 0 at every pair unreachable under pi.
Policy regularize(const Model& m, const Policy& pi);

struct StateEpoch {
  int state = 0;
  int epoch = 0;  // arrival epoch, 1..T-1 (T-1 is terminal)
  friend bool operator==(const StateEpoch&, const StateEpoch&) = default;
};

struct SomePolicyWitness {
  StateEpoch target;
  std::vector<int> predecessor_actions;  // a_{s'} with p(target | s', a_{s'}) = 0
};

struct RegularityReport {
  bool regular = true;
  std::optional<SomePolicyWitness> some_policy_witness;
  std::optional<StateEpoch> all_policy_witness;
};

/// Structural reachability test on the transition supports.
RegularityReport regularity_report(const Model& m);

}  // namespace vmdp
