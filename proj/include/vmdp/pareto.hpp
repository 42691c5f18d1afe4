#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vmdp/dynamics.hpp"
#include "vmdp/simplex.hpp"
#include "vmdp/vlp.hpp"

namespace vmdp {

enum class Efficiency { Unknown, Efficient, Dominated };

/// Weights p > 0 under which a vertex is optimal, with the KKT data.
struct WeightCertificate {
  Eigen::VectorXd weights;                // normalized, sums to 1
  Eigen::VectorXd nonbasic_multipliers;   // lambda_N = R'p - Y_Q'mu >= 0
  Eigen::VectorXd degenerate_multipliers; // mu >= 0, one per zero basic (empty when non-degenerate)
  Eigen::VectorXd equality_multipliers;   // A_B^{-T} (p'C)_B
  double kkt_residual = 0.0;              // max(0, -min lambda_N)
  double scalarized_value = 0.0;          // p'Cx at the vertex
  double resolved_optimum = 0.0;          // max p'Cx over P
};

/// A vertex of the feasible polyhedron carried with one regular basis.
struct VertexRecord {
  ActionMap actions;
  std::vector<int> basis;
  FrequencyVector x;
  Eigen::VectorXd value;
  Efficiency status = Efficiency::Unknown;
  std::optional<WeightCertificate> weights;
};

/// Vertex for the regular basis selected by `actions`.
VertexRecord make_vertex(const CanonicalProgram& cp, const ActionMap& actions);

struct EnumerationStats {
  std::size_t vertices_visited = 0;   // active vertices popped from the work list
  std::size_t efficiency_tests = 0;
  std::size_t pivots = 0;
  std::size_t degenerate_moves = 0;   // pivots that left the vertex unchanged
  std::size_t cache_hits = 0;
};

struct EnumerationResult {
  std::vector<VertexRecord> efficient;
  std::vector<Policy> policies;        // regular policy of each efficient vertex
  EnumerationStats stats;
};

/// Efficiency test by boundedness of
///   max sum(v)  s.t.  R u + v = 0,  Y_i u - s_i = 0 (i in Q),  u, v, s >= 0
/// with R = C_B A_B^{-1} A_N - C_N, Y = -A_B^{-1} A_N, Q the zero basics.
/// Started in Phase II at the origin.
bool efficiency_test(const CanonicalProgram& cp, const VertexRecord& v);
bool efficiency_test(const CanonicalProgram& cp, const VertexRecord& v,
                     const simplex::BasisFactorization& factor);

/// Maximize the equally weighted objective and return its optimal vertex on
/// a regular basis.
VertexRecord initial_efficient_vertex(const CanonicalProgram& cp);

/// Action maps differing from `actions` at exactly one (s, t).
std::vector<ActionMap> adjacent_regular_bases(const Layout& layout, const ActionMap& actions);

struct EnumerateOptions {
  bool force = false;  // skip the regular-basis count guard
};

/// Adjacency walk over efficient vertices, FIFO work list. Neighbour tests of
/// one active vertex run in parallel.
EnumerationResult enumerate_efficient(const CanonicalProgram& cp, const EnumerateOptions& options = {});

/// Single-threaded reference walk, one neighbour at a time.
EnumerationResult enumerate_efficient_serial(const CanonicalProgram& cp,
                                             const EnumerateOptions& options = {});

/// Weights p >= epsilon (before normalization) making v optimal for
/// max (p'C)x, found by the feasibility LP
///   lambda_N = R'p - Y_Q'mu,  lambda_N >= 0,  mu >= 0,  p >= epsilon
/// (mu only appears at a degenerate vertex). nullopt when no such p exists,
/// i.e. v is not efficient.
std::optional<WeightCertificate> recover_weights(const CanonicalProgram& cp, const VertexRecord& v,
                                                 double epsilon = 1e-3);

// ---------------------------------------------------------------------------
// Brute-force oracle

struct OracleEntry {
  ActionMap actions;            // first deterministic policy hitting this vertex
  FrequencyVector x;
  Eigen::VectorXd value;
  std::size_t equivalent_policies = 1;
  bool efficient = false;
};

struct OracleResult {
  std::vector<OracleEntry> vertices;   // one per equivalence class of deterministic policies
  std::size_t policies_evaluated = 0;

  [[nodiscard]] std::vector<const OracleEntry*> efficient() const;
};

/// Largest deterministic-policy count the oracle accepts.
inline constexpr std::uint64_t kOracleLimit = 1'000'000;

/// Evaluate every deterministic policy, dedup by frequency vector, and mark a
/// class efficient iff its value is not dominated by the convex hull of all
/// deterministic values. Parallel over policies.
OracleResult brute_force_oracle(const Model& m);
OracleResult brute_force_oracle_serial(const Model& m);

/// Optimal value of  max sum(w)  s.t.  sum_i lambda_i V_i - w = v, sum lambda = 1.
/// Zero (up to tolerance) iff v is not hull-dominated by the points V.
double hull_dominance_gap(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& v);

/// Componentwise a >= b with a != b (beyond tol).
bool dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol = 1e-12);

}  // namespace vmdp
