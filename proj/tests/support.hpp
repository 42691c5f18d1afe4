#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vmdp/dynamics.hpp"
#include "vmdp/model.hpp"
#include "vmdp/pareto.hpp"
#include "vmdp/random_models.hpp"
#include "vmdp/vlp.hpp"

namespace support {

inline vmdp::Model design_example() { return vmdp::build_design_model(vmdp::reference_design_instance()); }

// One efficient policy of the design example: 1-based (component 1, component
// 2) alternatives at epochs 1 and 2, and the tabulated value.
struct EfficientRow {
  std::array<int, 2> pi1;
  std::array<int, 2> pi2;
  std::array<double, 2> value;
};

inline const std::vector<EfficientRow>& design_efficient_set() {
  static const std::vector<EfficientRow> rows{
      {{5, 2}, {5, 2}, {-0.72, -0.61}}, {{4, 2}, {5, 2}, {-0.87, -0.53}}, {{4, 2}, {4, 2}, {-1.02, -0.44}},
      {{4, 5}, {4, 2}, {-1.30, -0.38}}, {{4, 5}, {4, 5}, {-1.58, -0.32}}, {{4, 2}, {4, 5}, {-1.30, -0.38}},
      {{5, 2}, {4, 2}, {-0.87, -0.53}}, {{5, 2}, {5, 3}, {-0.70, -0.88}}, {{5, 3}, {5, 3}, {-0.68, -1.16}},
      {{5, 3}, {5, 2}, {-0.70, -0.88}},
  };
  return rows;
}

inline vmdp::ActionMap design_map(const vmdp::Layout& L, std::array<int, 2> pi1, std::array<int, 2> pi2) {
  return vmdp::ActionMap(L, {pi1[0] - 1, pi1[1] - 1, pi2[0] - 1, pi2[1] - 1});
}

// Value of a deterministic policy computed by summing over every state
// trajectory: an oracle independent of the backward and forward recursions.
inline Eigen::VectorXd trajectory_value(const vmdp::Model& m, const vmdp::Policy& pi) {
  const int S = m.num_states();
  const int T = m.horizon();
  const int k = m.num_objectives();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(k);
  // Trajectories over (state, action) pairs for t < T-1 and a terminal state.
  std::function<void(int, int, double, Eigen::VectorXd)> walk = [&](int t, int s, double prob, Eigen::VectorXd acc) {
    if (prob == 0.0) return;
    if (t == T - 1) {
      for (int i = 0; i < k; ++i) acc[i] += m.terminal_reward(s)[static_cast<std::size_t>(i)];
      total += prob * acc;
      return;
    }
    for (int a = 0; a < m.num_actions(s); ++a) {
      const double q = pi.prob(t, s, a);
      if (q == 0.0) continue;
      Eigen::VectorXd next = acc;
      for (int i = 0; i < k; ++i) next[i] += m.reward(t, s, a)[static_cast<std::size_t>(i)];
      for (int j = 0; j < S; ++j) walk(t + 1, j, prob * q * m.transition(t, s, a, j), next);
    }
  };
  for (int s = 0; s < S; ++s) walk(0, s, m.alpha()[static_cast<std::size_t>(s)], Eigen::VectorXd::Zero(k));
  return total;
}

// Occupation probabilities by trajectory summation.
inline Eigen::VectorXd trajectory_frequencies(const vmdp::Model& m, const vmdp::Policy& pi) {
  const auto& L = m.layout();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.num_columns());
  std::function<void(int, int, double)> walk = [&](int t, int s, double prob) {
    if (prob == 0.0) return;
    if (t == m.horizon() - 1) {
      x[L.terminal_column(s)] += prob;
      return;
    }
    for (int a = 0; a < m.num_actions(s); ++a) {
      const double q = pi.prob(t, s, a);
      if (q == 0.0) continue;
      x[L.column(t, s, a)] += prob * q;
      for (int j = 0; j < m.num_states(); ++j) walk(t + 1, j, prob * q * m.transition(t, s, a, j));
    }
  };
  for (int s = 0; s < m.num_states(); ++s) walk(0, s, m.alpha()[static_cast<std::size_t>(s)]);
  return x;
}

// Deterministic policies of a small model, as action maps in index order.
inline std::vector<vmdp::ActionMap> all_action_maps(const vmdp::Layout& L) {
  std::vector<vmdp::ActionMap> out;
  for (const auto& map : vmdp::RegularBases(L)) out.push_back(map);
  return out;
}

inline bool weakly_dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  bool strict = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - tol) return false;
    if (a[i] > b[i] + tol) strict = true;
  }
  return strict;
}

// Model in which nothing can reach state `target` at arrival epoch 1:
// every transition at epoch 0 avoids it.
inline vmdp::Model unreachable_model(std::mt19937_64& rng, int target = 1) {
  auto m = vmdp::random_model(3, 3, {2, 2, 2}, 2, 0.0, rng);
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < 2; ++a) {
      auto row = m.transition_row(0, s, a);
      row[static_cast<std::size_t>(target)] = 0.0;
      double total = 0.0;
      for (double p : row) total += p;
      for (auto& p : row) p /= total;
    }
  return m;
}

}  // namespace support
