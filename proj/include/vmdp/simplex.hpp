#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vmdp::simplex {

/// max c'x  s.t.  Ax = b, x >= 0. A must have full row rank and m <= n;
/// b may have either sign.
struct LpProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

const char* to_string(LpStatus s);

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<int> basis;   // column indices, one per row
  Eigen::VectorXd x;        // primal point (last feasible point when Unbounded)
  double objective = 0.0;
  Eigen::VectorXd ray;      // Unbounded only: A d = 0, d >= 0, c'd > 0
  Eigen::VectorXd duals;    // Optimal only: y = B^{-T} c_B
  std::string diagnostic;
  long iterations = 0;
  bool phase_one_skipped = false;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-9;
  int refactor_every = 50;
  long max_iterations = 1'000'000;
};

/// Explicit dense inverse of a basis matrix with product-form updates and
/// periodic refactorization.
class BasisFactorization {
 public:
  /// Factor the columns `basis` of A. Throws std::domain_error when singular.
  BasisFactorization(const Eigen::MatrixXd& A, std::vector<int> basis, int refactor_every = 50,
                     double pivot_tolerance = 1e-9);

  [[nodiscard]] const std::vector<int>& basis() const { return basis_; }
  [[nodiscard]] const Eigen::MatrixXd& inverse() const { return inverse_; }
  [[nodiscard]] int size() const { return static_cast<int>(basis_.size()); }
  /// Position of column j in the basis, or -1.
  [[nodiscard]] int position(int column) const;

  /// B^{-1} v
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& v) const { return inverse_ * v; }
  /// B^{-T} v
  [[nodiscard]] Eigen::VectorXd solve_transpose(const Eigen::VectorXd& v) const {
    return inverse_.transpose() * v;
  }

  /// Replace basic column `leave` by `enter`. No-op when enter == leave.
  /// Throws std::domain_error when the result would be singular.
  void pivot(int enter, int leave);

  /// Recompute the inverse from scratch.
  void refactor();

  [[nodiscard]] int updates_since_refactor() const { return updates_; }

  /// Pivot with a precomputed alpha = B^{-1} a_enter.
  void pivot_at(int enter, int position, const Eigen::VectorXd& alpha);

 private:

  const Eigen::MatrixXd* A_;
  std::vector<int> basis_;
  Eigen::MatrixXd inverse_;
  int refactor_every_;
  double pivot_tolerance_;
  int updates_ = 0;
};

/// Basis obtained from `basis` by exchanging `leave` for `enter`. Throws
/// std::domain_error if the new basis matrix is singular.
std::vector<int> pivot(const Eigen::MatrixXd& A, std::span<const int> basis, int enter, int leave);

/// Two-phase primal simplex (Dantzig pricing, Bland's rule on degenerate
/// stretches). When `start` is a feasible basis Phase I is skipped. Throws
/// std::runtime_error when the iteration cap is hit.
LpOutcome solve(const LpProblem& p, std::optional<std::span<const int>> start = std::nullopt,
                const SimplexOptions& options = {});

}  // namespace vmdp::simplex
