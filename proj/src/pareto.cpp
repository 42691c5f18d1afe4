#include "vmdp/pareto.hpp"

#include <algorithm>
#include <cmath>

#include "vmdp/error.hpp"

namespace vmdp {

namespace {

constexpr double kZeroBasic = 1e-12;

// Reduced quantities of a basis: N, R = C_B A_B^{-1} A_N - C_N and the rows
// of Y = -A_B^{-1} A_N belonging to zero basics.
struct Tableau {
  std::vector<int> nonbasic;
  Eigen::MatrixXd R;
  Eigen::MatrixXd YQ;
};

Tableau make_tableau(const CanonicalProgram& cp, const FrequencyVector& x,
                     const simplex::BasisFactorization& f) {
  const int n = cp.cols();
  const int m = cp.rows();
  Tableau tab;
  std::vector<char> basic(static_cast<std::size_t>(n), 0);
  for (int j : f.basis()) basic[static_cast<std::size_t>(j)] = 1;
  for (int j = 0; j < n; ++j)
    if (!basic[static_cast<std::size_t>(j)]) tab.nonbasic.push_back(j);

  const auto nn = static_cast<Eigen::Index>(tab.nonbasic.size());
  Eigen::MatrixXd AN(m, nn);
  Eigen::MatrixXd CN(cp.num_objectives(), nn);
  for (Eigen::Index j = 0; j < nn; ++j) {
    AN.col(j) = cp.dense_A().col(tab.nonbasic[static_cast<std::size_t>(j)]);
    CN.col(j) = cp.C().col(tab.nonbasic[static_cast<std::size_t>(j)]);
  }
  Eigen::MatrixXd CB(cp.num_objectives(), m);
  for (int i = 0; i < m; ++i) CB.col(i) = cp.C().col(f.basis()[static_cast<std::size_t>(i)]);

  const Eigen::MatrixXd BinvAN = f.inverse() * AN;
  tab.R = CB * BinvAN - CN;

  std::vector<int> q;
  for (int i = 0; i < m; ++i)
    if (x.coords()[f.basis()[static_cast<std::size_t>(i)]] <= kZeroBasic) q.push_back(i);
  tab.YQ.resize(static_cast<Eigen::Index>(q.size()), nn);
  for (std::size_t r = 0; r < q.size(); ++r) tab.YQ.row(static_cast<Eigen::Index>(r)) = -BinvAN.row(q[r]);
  return tab;
}

simplex::BasisFactorization factor_of(const CanonicalProgram& cp, const VertexRecord& v) {
  return simplex::BasisFactorization(cp.dense_A(), v.basis);
}

}  // namespace

VertexRecord make_vertex(const CanonicalProgram& cp, const ActionMap& actions) {
  VertexRecord v{actions, regular_basis_columns(cp.layout(), actions), regular_basis_solve(cp, actions),
                 Eigen::VectorXd(), Efficiency::Unknown, std::nullopt};
  v.value = cp.C() * v.x.coords();
  return v;
}

bool efficiency_test(const CanonicalProgram& cp, const VertexRecord& v) {
  return efficiency_test(cp, v, factor_of(cp, v));
}

bool efficiency_test(const CanonicalProgram& cp, const VertexRecord& v, const simplex::BasisFactorization& f) {
  const Tableau tab = make_tableau(cp, v.x, f);
  const Eigen::Index nu = tab.R.cols();
  const Eigen::Index k = tab.R.rows();
  const Eigen::Index q = tab.YQ.rows();

  // Columns: u (nu), v (k), s (q). Rows: R u + v = 0, Y_Q u - s = 0.
  simplex::LpProblem lp{Eigen::MatrixXd::Zero(k + q, nu + k + q), Eigen::VectorXd::Zero(k + q),
                        Eigen::VectorXd::Zero(nu + k + q)};
  lp.A.topLeftCorner(k, nu) = tab.R;
  lp.A.block(0, nu, k, k) = Eigen::MatrixXd::Identity(k, k);
  lp.A.bottomLeftCorner(q, nu) = tab.YQ;
  lp.A.bottomRightCorner(q, q) = -Eigen::MatrixXd::Identity(q, q);
  lp.c.segment(nu, k).setOnes();

  std::vector<int> origin(static_cast<std::size_t>(k + q));
  for (Eigen::Index i = 0; i < k + q; ++i) origin[static_cast<std::size_t>(i)] = static_cast<int>(nu + i);
  const auto out = simplex::solve(lp, std::span<const int>(origin));
  if (!out.phase_one_skipped || out.status == simplex::LpStatus::Infeasible)
    throw SolverError("efficiency test could not start from the origin");
  return out.status == simplex::LpStatus::Optimal;
}

VertexRecord initial_efficient_vertex(const CanonicalProgram& cp) {
  const Layout& L = cp.layout();
  const Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(cp.num_objectives(), 1.0 / static_cast<double>(cp.num_objectives()));
  simplex::LpProblem lp{cp.dense_A(), cp.b(), cp.C().transpose() * weights};
  const auto start = regular_basis_columns(L, ActionMap(L));
  const auto out = simplex::solve(lp, std::span<const int>(start));
  if (out.status != simplex::LpStatus::Optimal)
    throw SolverError(std::string("equally weighted program is ") + simplex::to_string(out.status));

  // Read the regular basis off the optimal point: the action carrying the
  // mass at every reachable (s, t), action 0 elsewhere.
  ActionMap map(L);
  for (int t = 0; t < L.num_decision_epochs(); ++t)
    for (int s = 0; s < L.num_states(); ++s) {
      int best = 0;
      for (int a = 1; a < L.num_actions(s); ++a)
        if (out.x[L.column(t, s, a)] > out.x[L.column(t, s, best)]) best = a;
      double mass = 0.0;
      for (int a = 0; a < L.num_actions(s); ++a) mass += out.x[L.column(t, s, a)];
      map.at(t, s) = mass > kZeroBasic ? best : 0;
    }
  VertexRecord v = make_vertex(cp, map);
  if ((v.x.coords() - out.x).lpNorm<Eigen::Infinity>() > 1e-7)
    throw SolverError("optimal vertex has no regular basis representation");
  v.status = efficiency_test(cp, v) ? Efficiency::Efficient : Efficiency::Dominated;
  if (v.status != Efficiency::Efficient) throw SolverError("scalarized optimum failed the efficiency test");
  return v;
}

std::vector<ActionMap> adjacent_regular_bases(const Layout& L, const ActionMap& actions) {
  std::vector<ActionMap> out;
  for (int t = 0; t < L.num_decision_epochs(); ++t)
    for (int s = 0; s < L.num_states(); ++s)
      for (int a = 0; a < L.num_actions(s); ++a) {
        if (a == actions.at(t, s)) continue;
        out.push_back(actions);
        out.back().at(t, s) = a;
      }
  return out;
}

std::optional<WeightCertificate> recover_weights(const CanonicalProgram& cp, const VertexRecord& v,
                                                 double epsilon) {
  const auto f = factor_of(cp, v);
  const Tableau tab = make_tableau(cp, v.x, f);
  const Eigen::Index nu = tab.R.cols();
  const Eigen::Index k = tab.R.rows();
  const Eigen::Index q = tab.YQ.rows();

  WeightCertificate cert;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(q);
  if (nu == 0) {
    cert.weights = Eigen::VectorXd::Constant(k, epsilon);
  } else {
    // p = epsilon + p':  lambda - R'p' + Y_Q'mu = epsilon R'1, all >= 0.
    simplex::LpProblem lp{Eigen::MatrixXd::Zero(nu, nu + k + q), epsilon * tab.R.transpose() * Eigen::VectorXd::Ones(k),
                          Eigen::VectorXd::Zero(nu + k + q)};
    lp.A.leftCols(nu) = Eigen::MatrixXd::Identity(nu, nu);
    lp.A.middleCols(nu, k) = -tab.R.transpose();
    lp.A.rightCols(q) = tab.YQ.transpose();
    const auto out = simplex::solve(lp);
    if (out.status != simplex::LpStatus::Optimal) return std::nullopt;
    cert.weights = out.x.segment(nu, k).array() + epsilon;
    mu = out.x.tail(q);
  }
  const double scale = cert.weights.sum();
  cert.weights /= scale;
  mu /= scale;

  cert.nonbasic_multipliers = tab.R.transpose() * cert.weights - tab.YQ.transpose() * mu;
  cert.degenerate_multipliers = mu;
  cert.kkt_residual = nu == 0 ? 0.0 : std::max(0.0, -cert.nonbasic_multipliers.minCoeff());

  const Eigen::VectorXd c = cp.C().transpose() * cert.weights;
  Eigen::VectorXd cB(cp.rows());
  for (int i = 0; i < cp.rows(); ++i) cB[i] = c[f.basis()[static_cast<std::size_t>(i)]];
  cert.equality_multipliers = f.solve_transpose(cB);
  cert.scalarized_value = c.dot(v.x.coords());

  simplex::LpProblem resolve{cp.dense_A(), cp.b(), c};
  const auto start = regular_basis_columns(cp.layout(), ActionMap(cp.layout()));
  const auto best = simplex::solve(resolve, std::span<const int>(start));
  if (best.status != simplex::LpStatus::Optimal) throw SolverError("scalarized re-solve is not optimal");
  cert.resolved_optimum = best.objective;
  return cert;
}

bool dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  bool strict = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - tol) return false;
    if (a[i] > b[i] + tol) strict = true;
  }
  return strict;
}

double hull_dominance_gap(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& v) {
  const auto np = static_cast<Eigen::Index>(points.size());
  const Eigen::Index k = v.size();
  // Columns: lambda (np), w (k). Rows: sum lambda_i V_i - w = v, sum lambda = 1.
  simplex::LpProblem lp{Eigen::MatrixXd::Zero(k + 1, np + k), Eigen::VectorXd::Zero(k + 1),
                        Eigen::VectorXd::Zero(np + k)};
  for (Eigen::Index i = 0; i < np; ++i) {
    lp.A.col(i).head(k) = points[static_cast<std::size_t>(i)];
    lp.A(k, i) = 1.0;
  }
  lp.A.block(0, np, k, k) = -Eigen::MatrixXd::Identity(k, k);
  lp.b.head(k) = v;
  lp.b[k] = 1.0;
  lp.c.tail(k).setOnes();
  const auto out = simplex::solve(lp);
  if (out.status == simplex::LpStatus::Unbounded) throw SolverError("hull dominance LP is unbounded");
  // Infeasible: no hull point weakly exceeds v.
  return out.status == simplex::LpStatus::Optimal ? out.objective : 0.0;
}

}  // namespace vmdp
