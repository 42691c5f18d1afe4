#include "vmdp/layout.hpp"

#include <limits>
#include <numeric>

#include "vmdp/error.hpp"

namespace vmdp {

Layout::Layout(int num_states, int horizon, std::vector<int> actions_per_state)
    : num_states_(num_states), horizon_(horizon), actions_(std::move(actions_per_state)) {
  if (num_states_ < 1) throw ModelError("num_states must be positive");
  if (horizon_ < 2) throw ModelError("horizon must be at least 2");
  if (static_cast<int>(actions_.size()) != num_states_)
    throw ModelError("actions_per_state has " + std::to_string(actions_.size()) +
                     " entries, expected " + std::to_string(num_states_));
  offsets_.reserve(actions_.size());
  for (std::size_t s = 0; s < actions_.size(); ++s) {
    if (actions_[s] < 1)
      throw ModelError("state " + std::to_string(s) + " has no actions");
    offsets_.push_back(total_actions_);
    total_actions_ += actions_[s];
    slot_state_.insert(slot_state_.end(), static_cast<std::size_t>(actions_[s]),
                       static_cast<int>(s));
  }
}

Layout::ColumnIndex Layout::decode(int column) const {
  const int decision_columns = num_decision_epochs() * total_actions_;
  if (column >= decision_columns) return {horizon_ - 1, column - decision_columns, -1};
  const int t = column / total_actions_;
  const int slot = column % total_actions_;
  const int s = slot_state_[static_cast<std::size_t>(slot)];
  return {t, s, slot - offsets_[static_cast<std::size_t>(s)]};
}

std::uint64_t Layout::deterministic_policy_count() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t per_epoch = 1;
  for (int k : actions_) {
    const auto ku = static_cast<std::uint64_t>(k);
    if (per_epoch > kMax / ku) return kMax;
    per_epoch *= ku;
  }
  std::uint64_t total = 1;
  for (int t = 0; t < num_decision_epochs(); ++t) {
    if (total > kMax / per_epoch) return kMax;
    total *= per_epoch;
  }
  return total;
}

}  // namespace vmdp
