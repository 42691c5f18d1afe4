#include "vmdp/random_models.hpp"

namespace vmdp {

Model random_model(int num_states, int horizon, std::vector<int> actions, int num_objectives, double sparsity,
                   std::mt19937_64& rng) {
  Model m(num_states, horizon, num_objectives, std::move(actions));
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> reward(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, num_states - 1);

  for (int t = 0; t + 1 < horizon; ++t)
    for (int s = 0; s < num_states; ++s)
      for (int a = 0; a < m.num_actions(s); ++a) {
        auto row = m.transition_row(t, s, a);
        const int keep = pick(rng);
        double total = 0.0;
        for (int j = 0; j < num_states; ++j) {
          const bool zero = j != keep && unit(rng) < sparsity;
          row[static_cast<std::size_t>(j)] = zero ? 0.0 : expo(rng) + 1e-3;
          total += row[static_cast<std::size_t>(j)];
        }
        for (auto& p : row) p /= total;
        for (auto& r : m.reward(t, s, a)) r = reward(rng);
      }
  for (int s = 0; s < num_states; ++s)
    for (auto& r : m.terminal_reward(s)) r = reward(rng);

  double total = 0.0;
  for (auto& a : m.alpha()) total += (a = expo(rng) + 0.05);
  for (auto& a : m.alpha()) a /= total;
  return m;
}

Model random_model(const RandomModelShape& shape, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> states(1, shape.max_states);
  std::uniform_int_distribution<int> horizon(2, shape.max_horizon);
  std::uniform_int_distribution<int> count(1, shape.max_actions);
  const int S = states(rng);
  const int T = horizon(rng);
  std::vector<int> actions(static_cast<std::size_t>(S));
  for (auto& k : actions) k = count(rng);
  bool choice = false;
  for (int k : actions) choice = choice || k >= 2;
  if (!choice) actions[std::uniform_int_distribution<std::size_t>(0, actions.size() - 1)(rng)] = 2;
  return random_model(S, T, std::move(actions), shape.num_objectives, shape.sparsity, rng);
}

Policy random_policy(const Layout& layout, std::mt19937_64& rng, double deterministic_share) {
  Policy pi(layout);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  for (int t = 0; t < layout.num_decision_epochs(); ++t)
    for (int s = 0; s < layout.num_states(); ++s) {
      auto row = pi.row(t, s);
      if (unit(rng) < deterministic_share) {
        row[std::uniform_int_distribution<std::size_t>(0, row.size() - 1)(rng)] = 1.0;
        continue;
      }
      double total = 0.0;
      for (auto& q : row) total += (q = expo(rng));
      for (auto& q : row) q /= total;
    }
  return pi;
}

ActionMap random_action_map(const Layout& layout, std::mt19937_64& rng) {
  ActionMap map(layout);
  for (int t = 0; t < layout.num_decision_epochs(); ++t)
    for (int s = 0; s < layout.num_states(); ++s)
      map.at(t, s) = std::uniform_int_distribution<int>(0, layout.num_actions(s) - 1)(rng);
  return map;
}

}  // namespace vmdp
