#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vmdp/dynamics.hpp"
#include "vmdp/model.hpp"

namespace vmdp {

/// Shape limits for random test models. Dimensions are drawn uniformly from
/// [1, max_states], [1, max_actions] (with at least one state getting two or
/// more actions) and [2, max_horizon].
struct RandomModelShape {
  int max_states = 3;
  int max_actions = 3;
  int max_horizon = 4;
  int num_objectives = 2;
  /// Probability that a transition entry is forced to zero. Zero keeps every
  /// transition positive (a regular process); larger values produce
  /// unreachable state-epoch pairs and degenerate vertices.
  double sparsity = 0.0;
};

/// Random model of the given dimensions: transition rows from normalized
/// exponentials (with sparsity zeros, each row keeping one positive entry),
/// rewards uniform on [-1, 1], a random positive initial distribution.
Model random_model(int num_states, int horizon, std::vector<int> actions, int num_objectives, double sparsity,
                   std::mt19937_64& rng);

Model random_model(const RandomModelShape& shape, std::mt19937_64& rng);

/// Random Markov policy; each (s, t) row is deterministic with probability
/// `deterministic_share`, otherwise a random distribution.
Policy random_policy(const Layout& layout, std::mt19937_64& rng, double deterministic_share = 0.3);

/// Uniformly random action map.
ActionMap random_action_map(const Layout& layout, std::mt19937_64& rng);

}  // namespace vmdp
