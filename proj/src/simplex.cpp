#include "vmdp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vmdp::simplex {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Infeasible: return "infeasible";
  }
  return "?";
}

BasisFactorization::BasisFactorization(const Eigen::MatrixXd& A, std::vector<int> basis,
                                       int refactor_every, double pivot_tolerance)
    : A_(&A), basis_(std::move(basis)), refactor_every_(refactor_every), pivot_tolerance_(pivot_tolerance) {
  if (static_cast<Eigen::Index>(basis_.size()) != A.rows())
    throw std::domain_error("basis size does not match the number of rows");
  for (int j : basis_)
    if (j < 0 || j >= A.cols()) throw std::domain_error("basis column out of range");
  refactor();
}

int BasisFactorization::position(int column) const {
  auto it = std::find(basis_.begin(), basis_.end(), column);
  return it == basis_.end() ? -1 : static_cast<int>(it - basis_.begin());
}

void BasisFactorization::refactor() {
  const auto m = static_cast<Eigen::Index>(basis_.size());
  Eigen::MatrixXd B(m, m);
  for (Eigen::Index i = 0; i < m; ++i) B.col(i) = A_->col(basis_[static_cast<std::size_t>(i)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  if (!lu.isInvertible()) throw std::domain_error("singular basis matrix");
  inverse_ = lu.inverse();
  updates_ = 0;
}

void BasisFactorization::pivot(int enter, int leave) {
  if (enter == leave) return;
  const int pos = position(leave);
  if (pos < 0) throw std::domain_error("leaving column is not basic");
  if (position(enter) >= 0) throw std::domain_error("entering column is already basic");
  if (enter < 0 || enter >= A_->cols()) throw std::domain_error("entering column out of range");
  Eigen::VectorXd alpha = inverse_ * A_->col(enter);
  pivot_at(enter, pos, alpha);
}

void BasisFactorization::pivot_at(int enter, int pos, const Eigen::VectorXd& alpha) {
  const double piv = alpha[pos];
  if (!(std::abs(piv) > pivot_tolerance_)) throw std::domain_error("pivot would make the basis singular");
  inverse_.row(pos) /= piv;
  for (Eigen::Index i = 0; i < inverse_.rows(); ++i) {
    if (i == pos || alpha[i] == 0.0) continue;
    inverse_.row(i) -= alpha[i] * inverse_.row(pos);
  }
  basis_[static_cast<std::size_t>(pos)] = enter;
  if (++updates_ >= refactor_every_) refactor();
}

std::vector<int> pivot(const Eigen::MatrixXd& A, std::span<const int> basis, int enter, int leave) {
  BasisFactorization f(A, {basis.begin(), basis.end()});
  f.pivot(enter, leave);
  return f.basis();
}

namespace {

constexpr long kDegenerateRunLimit = 20;

struct LoopResult {
  LpStatus status = LpStatus::Optimal;
  Eigen::VectorXd ray;
};

// Primal simplex on max c'x, Ax = b, x >= 0 from the feasible basis in f.
// Dantzig pricing while the objective moves. After a run of degenerate pivots
// it switches to Bland's rule (lowest-index improving column enters, lowest
// basic index leaves among tied ratios) until the next nondegenerate step,
// which rules out cycling.
LoopResult run_primal(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                      BasisFactorization& f, const SimplexOptions& opt, long& iterations) {
  const Eigen::Index n = A.cols();
  const Eigen::Index m = A.rows();
  std::vector<char> basic(static_cast<std::size_t>(n), 0);
  for (int j : f.basis()) basic[static_cast<std::size_t>(j)] = 1;

  Eigen::VectorXd cB(m);
  long degenerate_run = 0;
  while (true) {
    if (iterations >= opt.max_iterations) throw std::runtime_error("simplex iteration cap reached");
    const Eigen::VectorXd xB = f.solve(b);
    for (Eigen::Index i = 0; i < m; ++i) cB[i] = c[f.basis()[static_cast<std::size_t>(i)]];
    const Eigen::VectorXd y = f.solve_transpose(cB);

    const bool bland = degenerate_run >= kDegenerateRunLimit;
    int enter = -1;
    double best_rc = opt.optimality_tolerance;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (basic[static_cast<std::size_t>(j)]) continue;
      const double rc = c[j] - A.col(j).dot(y);
      if (rc > best_rc) {
        enter = static_cast<int>(j);
        if (bland) break;
        best_rc = rc;
      }
    }
    if (enter < 0) return {};

    const Eigen::VectorXd alpha = f.solve(A.col(enter));
    int leave_pos = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!(alpha[i] > opt.pivot_tolerance)) continue;
      const double ratio = std::max(xB[i], 0.0) / alpha[i];
      const double tie = 1e-12 * std::max(1.0, std::abs(best));
      if (leave_pos < 0 || ratio < best - tie) {
        best = ratio;
        leave_pos = static_cast<int>(i);
      } else if (ratio <= best + tie &&
                 f.basis()[static_cast<std::size_t>(i)] < f.basis()[static_cast<std::size_t>(leave_pos)]) {
        best = std::min(best, ratio);
        leave_pos = static_cast<int>(i);
      }
    }
    if (leave_pos < 0) {
      LoopResult out{LpStatus::Unbounded, Eigen::VectorXd::Zero(n)};
      out.ray[enter] = 1.0;
      for (Eigen::Index i = 0; i < m; ++i) out.ray[f.basis()[static_cast<std::size_t>(i)]] = -alpha[i];
      return out;
    }
    degenerate_run = best * alpha[leave_pos] > opt.feasibility_tolerance * 1e-3 ? 0 : degenerate_run + 1;
    basic[static_cast<std::size_t>(f.basis()[static_cast<std::size_t>(leave_pos)])] = 0;
    basic[static_cast<std::size_t>(enter)] = 1;
    f.pivot_at(enter, leave_pos, alpha);
    ++iterations;
  }
}

LpOutcome finish(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                 const BasisFactorization& f, LoopResult loop, const SimplexOptions& opt) {
  LpOutcome out;
  out.status = loop.status;
  out.basis = f.basis();
  out.x = Eigen::VectorXd::Zero(A.cols());
  const Eigen::VectorXd xB = f.solve(b);
  for (std::size_t i = 0; i < out.basis.size(); ++i) {
    double v = xB[static_cast<Eigen::Index>(i)];
    if (v < 0.0 && v > -opt.feasibility_tolerance) v = 0.0;
    out.x[out.basis[i]] = v;
  }
  out.objective = c.dot(out.x);
  if (loop.status == LpStatus::Unbounded) {
    out.ray = std::move(loop.ray);
  } else {
    Eigen::VectorXd cB(static_cast<Eigen::Index>(out.basis.size()));
    for (std::size_t i = 0; i < out.basis.size(); ++i) cB[static_cast<Eigen::Index>(i)] = c[out.basis[i]];
    out.duals = f.solve_transpose(cB);
  }
  return out;
}

}  // namespace

LpOutcome solve(const LpProblem& p, std::optional<std::span<const int>> start, const SimplexOptions& opt) {
  const Eigen::Index m = p.A.rows();
  const Eigen::Index n = p.A.cols();
  if (p.b.size() != m || p.c.size() != n) throw std::invalid_argument("LP dimensions are inconsistent");
  if (m > n) throw std::invalid_argument("LP has more constraints than variables");

  long iterations = 0;
  if (start) {
    try {
      BasisFactorization f(p.A, {start->begin(), start->end()}, opt.refactor_every, opt.pivot_tolerance);
      if (m == 0 || f.solve(p.b).minCoeff() >= -opt.feasibility_tolerance) {
        auto loop = run_primal(p.A, p.b, p.c, f, opt, iterations);
        auto out = finish(p.A, p.b, p.c, f, std::move(loop), opt);
        out.iterations = iterations;
        out.phase_one_skipped = true;
        return out;
      }
    } catch (const std::domain_error&) {
      // singular start basis: fall back to Phase I
    }
  }

  // Phase I: rows flipped so the right-hand side is non-negative, one
  // artificial per row, maximize minus the artificial sum.
  Eigen::MatrixXd A1(m, n + m);
  Eigen::VectorXd b1(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = p.b[i] < 0.0 ? -1.0 : 1.0;
    A1.row(i).head(n) = sign * p.A.row(i);
    b1[i] = sign * p.b[i];
  }
  A1.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + m);
  c1.tail(m).setConstant(-1.0);

  std::vector<int> artificial(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) artificial[static_cast<std::size_t>(i)] = static_cast<int>(n + i);
  BasisFactorization f1(A1, artificial, opt.refactor_every, opt.pivot_tolerance);
  run_primal(A1, b1, c1, f1, opt, iterations);

  const Eigen::VectorXd xB1 = f1.solve(b1);
  double infeasibility = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (f1.basis()[static_cast<std::size_t>(i)] >= n) infeasibility += std::max(0.0, xB1[i]);
  const double scale = std::max(1.0, b1.size() > 0 ? b1.lpNorm<Eigen::Infinity>() : 0.0);
  if (infeasibility > opt.feasibility_tolerance * scale) {
    LpOutcome out;
    out.status = LpStatus::Infeasible;
    out.iterations = iterations;
    out.diagnostic = "no feasible point (phase I residual " + std::to_string(infeasibility) + ")";
    return out;
  }

  // Drive the remaining (zero-level) artificials out of the basis.
  for (Eigen::Index pos = 0; pos < m; ++pos) {
    if (f1.basis()[static_cast<std::size_t>(pos)] < n) continue;
    const Eigen::RowVectorXd row = f1.inverse().row(pos) * A1.leftCols(n);
    int enter = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(row[j]) > opt.pivot_tolerance && f1.position(static_cast<int>(j)) < 0) {
        enter = static_cast<int>(j);
        break;
      }
    }
    if (enter < 0) {
      LpOutcome out;
      out.status = LpStatus::Infeasible;
      out.iterations = iterations;
      out.diagnostic = "constraint matrix is rank deficient (row " + std::to_string(pos) + " is redundant)";
      return out;
    }
    f1.pivot_at(enter, static_cast<int>(pos), f1.solve(A1.col(enter)));
    ++iterations;
  }

  BasisFactorization f(p.A, f1.basis(), opt.refactor_every, opt.pivot_tolerance);
  auto loop = run_primal(p.A, p.b, p.c, f, opt, iterations);
  auto out = finish(p.A, p.b, p.c, f, std::move(loop), opt);
  out.iterations = iterations;
  return out;
}

}  // namespace vmdp::simplex
