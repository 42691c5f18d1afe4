#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vmdp {

/// Index arithmetic shared by models, policies, frequency vectors and the
/// canonical program.
///
/// Everything is 0-based. Decision epochs are t = 0..T-2, the terminal epoch
/// is T-1. Columns are ordered epoch-major, then state, then action, followed
/// by the S terminal columns:
///
///   column(t, s, a)     = t*K + offset(s) + a
///   terminal_column(s)  = (T-1)*K + s
///
/// Rows of the constraint matrix are ordered the same way: row t*S + j holds
/// the balance equation for state j at epoch t (t = T-1 is the terminal row).
class Layout {
 public:
  struct ColumnIndex {
    int epoch = 0;
    int state = 0;
    int action = -1;  // -1 for a terminal column
    [[nodiscard]] bool terminal() const { return action < 0; }
  };

  Layout() = default;
  Layout(int num_states, int horizon, std::vector<int> actions_per_state);

  [[nodiscard]] int num_states() const { return num_states_; }
  [[nodiscard]] int horizon() const { return horizon_; }
  [[nodiscard]] int num_decision_epochs() const { return horizon_ - 1; }
  [[nodiscard]] int num_actions(int s) const { return actions_[static_cast<std::size_t>(s)]; }
  [[nodiscard]] int total_actions() const { return total_actions_; }
  [[nodiscard]] int action_offset(int s) const { return offsets_[static_cast<std::size_t>(s)]; }
  [[nodiscard]] std::span<const int> actions_per_state() const { return actions_; }

  [[nodiscard]] int num_rows() const { return horizon_ * num_states_; }
  [[nodiscard]] int num_columns() const {
    return num_decision_epochs() * total_actions_ + num_states_;
  }
  [[nodiscard]] int column(int t, int s, int a) const {
    return t * total_actions_ + offsets_[static_cast<std::size_t>(s)] + a;
  }
  [[nodiscard]] int terminal_column(int s) const {
    return num_decision_epochs() * total_actions_ + s;
  }
  [[nodiscard]] int row(int t, int j) const { return t * num_states_ + j; }
  [[nodiscard]] ColumnIndex decode(int column) const;

  /// Number of deterministic policies, (prod k_s)^(T-1), saturated at UINT64_MAX.
  [[nodiscard]] std::uint64_t deterministic_policy_count() const;

  friend bool operator==(const Layout&, const Layout&) = default;

 private:
  int num_states_ = 0;
  int horizon_ = 0;
  int total_actions_ = 0;
  std::vector<int> actions_;
  std::vector<int> offsets_;
  std::vector<int> slot_state_;
};

}  // namespace vmdp
