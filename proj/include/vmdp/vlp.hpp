#pragma once

#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "vmdp/dynamics.hpp"
#include "vmdp/layout.hpp"
#include "vmdp/model.hpp"

namespace vmdp {

/// Refuse to iterate regular bases beyond this count unless forced.
inline constexpr std::uint64_t kRegularBasisLimit = 10'000'000;

/// The vector linear program  V-max Cx  s.t.  Ax = b, x >= 0  equivalent to a
/// model. A is (T*S) x ((T-1)K + S): summation blocks on the diagonal,
/// negated transition blocks below it and an identity over the terminal
/// columns. b = (alpha, 0, ..., 0). Column j of C is the reward attached to
/// column j.
class CanonicalProgram {
 public:
  explicit CanonicalProgram(Model model);

  [[nodiscard]] const Model& model() const { return *model_; }
  [[nodiscard]] const Layout& layout() const { return model_->layout(); }
  [[nodiscard]] int rows() const { return layout().num_rows(); }
  [[nodiscard]] int cols() const { return layout().num_columns(); }
  [[nodiscard]] int num_objectives() const { return model_->num_objectives(); }

  [[nodiscard]] const Eigen::SparseMatrix<double>& A() const { return A_; }
  [[nodiscard]] const Eigen::MatrixXd& dense_A() const { return dense_A_; }
  [[nodiscard]] const Eigen::VectorXd& b() const { return b_; }
  [[nodiscard]] const Eigen::MatrixXd& C() const { return C_; }

  /// Stored entries, including probabilities that happen to be zero.
  [[nodiscard]] long structural_nonzeros() const { return A_.nonZeros(); }
  /// Entries that are numerically nonzero.
  [[nodiscard]] long numerical_nonzeros() const;
  /// (T-1)(K + S*K) + S: the size of the block pattern.
  [[nodiscard]] static long expected_nonzeros(const Layout& layout);

  [[nodiscard]] bool process_regular() const { return regular_; }

 private:
  std::shared_ptr<const Model> model_;
  Eigen::SparseMatrix<double> A_;
  Eigen::MatrixXd dense_A_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd C_;
  bool regular_ = true;
};

CanonicalProgram build_program(const Model& m);

/// Columns of the regular basis selected by an action map, ordered so that
/// basis position i sits on row i (making A_B lower triangular).
std::vector<int> regular_basis_columns(const Layout& layout, const ActionMap& actions);

/// Structural check of A_B for a regular basis: lower triangular, unit
/// diagonal, off-diagonal entries in [-1, 0].
bool is_unit_lower_triangular(const CanonicalProgram& cp, const ActionMap& actions);

/// Forward substitution through the triangular basis; non-selected columns
/// are zero. Always feasible since b >= 0.
FrequencyVector regular_basis_solve(const CanonicalProgram& cp, const ActionMap& actions);

/// Certify rank(A) = m by exhibiting a nonsingular (unit triangular) basis.
bool certify_full_rank(const CanonicalProgram& cp);

/// Action map number `index` in mixed-radix order (epoch-major, state, action).
ActionMap action_map_from_index(const Layout& layout, std::uint64_t index);

/// Input range over all (prod k_s)^(T-1) action maps.
class RegularBases {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = ActionMap;
    using difference_type = std::ptrdiff_t;
    using pointer = const ActionMap*;
    using reference = const ActionMap&;

    iterator() = default;
    iterator(const Layout* layout, bool done);
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) {
      return a.done_ == b.done_ && (a.done_ || a.current_ == b.current_);
    }

   private:
    const Layout* layout_ = nullptr;
    ActionMap current_;
    bool done_ = true;
  };

  explicit RegularBases(const Layout& layout) : layout_(layout) {}
  [[nodiscard]] iterator begin() const { return {&layout_, false}; }
  [[nodiscard]] iterator end() const { return {&layout_, true}; }
  [[nodiscard]] std::uint64_t size() const { return layout_.deterministic_policy_count(); }

 private:
  Layout layout_;
};

/// All regular bases; throws ModelError above kRegularBasisLimit unless forced.
RegularBases enumerate_regular_bases(const CanonicalProgram& cp, bool force = false);

/// MatrixMarket coordinate (A) and array (b, C) exports.
void write_matrix_market_A(const CanonicalProgram& cp, std::ostream& out);
void write_matrix_market_b(const CanonicalProgram& cp, std::ostream& out);
void write_matrix_market_C(const CanonicalProgram& cp, std::ostream& out);

}  // namespace vmdp
