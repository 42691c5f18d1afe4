#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vmdp/layout.hpp"

namespace vmdp {

/// Probability sums are checked to this tolerance unless overridden.
inline constexpr double kDefaultModelTolerance = 1e-12;

/// A finite-horizon Markov decision process with vector-valued rewards.
///
/// Storage is flat; use the accessors. A freshly constructed model has all
/// transitions and rewards zero and a uniform initial distribution, so it
/// must be filled in before it validates.
class Model {
 public:
  Model(int num_states, int horizon, int num_objectives, std::vector<int> actions_per_state);

  [[nodiscard]] const Layout& layout() const { return layout_; }
  [[nodiscard]] int num_states() const { return layout_.num_states(); }
  [[nodiscard]] int horizon() const { return layout_.horizon(); }
  [[nodiscard]] int num_objectives() const { return num_objectives_; }
  [[nodiscard]] int num_actions(int s) const { return layout_.num_actions(s); }

  /// p_t(j | s, a) for decision epoch t in [0, T-2].
  [[nodiscard]] double transition(int t, int s, int a, int j) const {
    return transitions_[transition_index(t, s, a) + static_cast<std::size_t>(j)];
  }
  double& transition(int t, int s, int a, int j) {
    return transitions_[transition_index(t, s, a) + static_cast<std::size_t>(j)];
  }
  [[nodiscard]] std::span<const double> transition_row(int t, int s, int a) const {
    return {transitions_.data() + transition_index(t, s, a),
            static_cast<std::size_t>(num_states())};
  }
  std::span<double> transition_row(int t, int s, int a) {
    return {transitions_.data() + transition_index(t, s, a),
            static_cast<std::size_t>(num_states())};
  }

  /// R_t(s, a), a k-vector.
  [[nodiscard]] std::span<const double> reward(int t, int s, int a) const {
    return {rewards_.data() + reward_index(t, s, a), static_cast<std::size_t>(num_objectives_)};
  }
  std::span<double> reward(int t, int s, int a) {
    return {rewards_.data() + reward_index(t, s, a), static_cast<std::size_t>(num_objectives_)};
  }

  /// R_T(s), a k-vector.
  [[nodiscard]] std::span<const double> terminal_reward(int s) const {
    return {terminal_rewards_.data() + static_cast<std::size_t>(s * num_objectives_),
            static_cast<std::size_t>(num_objectives_)};
  }
  std::span<double> terminal_reward(int s) {
    return {terminal_rewards_.data() + static_cast<std::size_t>(s * num_objectives_),
            static_cast<std::size_t>(num_objectives_)};
  }

  [[nodiscard]] std::span<const double> alpha() const { return alpha_; }
  std::span<double> alpha() { return alpha_; }

  friend bool operator==(const Model&, const Model&) = default;

 private:
  [[nodiscard]] std::size_t transition_index(int t, int s, int a) const {
    return static_cast<std::size_t>(layout_.column(t, s, a)) *
           static_cast<std::size_t>(num_states());
  }
  [[nodiscard]] std::size_t reward_index(int t, int s, int a) const {
    return static_cast<std::size_t>(layout_.column(t, s, a)) *
           static_cast<std::size_t>(num_objectives_);
  }

  Layout layout_;
  int num_objectives_;
  std::vector<double> transitions_;
  std::vector<double> rewards_;
  std::vector<double> terminal_rewards_;
  std::vector<double> alpha_;
};

/// Result of a report-valued check: empty means ok.
struct ValidationReport {
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

ValidationReport validate_model(const Model& m, double tolerance = kDefaultModelTolerance);

/// Throws ModelError listing the violations if the model is invalid.
void require_valid(const Model& m, double tolerance = kDefaultModelTolerance);

// ---------------------------------------------------------------------------
// Two-component design problem: pick one alternative per component, trading
// cost against reliability.

struct Alternative {
  double cost = 0.0;
  double reliability = 1.0;
  friend bool operator==(const Alternative&, const Alternative&) = default;
};

struct DesignInstance {
  std::vector<Alternative> component1;
  std::vector<Alternative> component2;

  [[nodiscard]] const std::vector<Alternative>& component(int s) const {
    return s == 0 ? component1 : component2;
  }
  friend bool operator==(const DesignInstance&, const DesignInstance&) = default;
};

/// Two states (components), three epochs, two objectives: (-cost, log reliability).
/// Epoch 1 moves deterministically to the other component, epoch 2 moves
/// uniformly to either state, terminal rewards are zero. alpha defaults to
/// (0.5, 0.5). Throws ModelError on a non-positive reliability.
Model build_design_model(const DesignInstance& d, std::optional<std::vector<double>> alpha = {});

/// Random design instance with uniform(0,1) cost and reliability marginals and
/// rank correlation approximately rho within each component. Reliabilities
/// are clamped to [0.01, 1]. Deterministic for a fixed seed.
DesignInstance generate_random_instance(int k1, int k2, double rho, std::uint64_t seed);

/// The instance tabulated for k1 = k2 = 5 in the design case study.
DesignInstance reference_design_instance();

/// Pearson correlation of two equally sized samples (NaN when undefined).
double sample_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace vmdp
