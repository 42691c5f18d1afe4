#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "vmdp/error.hpp"
#include "vmdp/vlp.hpp"

using namespace vmdp;

TEST_CASE("design example program dimensions") {
  const CanonicalProgram cp(support::design_example());
  CHECK(cp.rows() == 6);
  CHECK(cp.cols() == 22);
  CHECK(cp.A().rows() == 6);
  CHECK(cp.A().cols() == 22);
  CHECK(cp.C().rows() == 2);
  CHECK(cp.C().cols() == 22);
  CHECK(cp.b()[0] == 0.5);
  CHECK(cp.b()[1] == 0.5);
  CHECK(cp.b().tail(4).isZero(0.0));
  // (T-1)(K + S K) + S with S = 2, K = 10, T = 3
  CHECK(CanonicalProgram::expected_nonzeros(cp.layout()) == 2 * (10 + 20) + 2);
  CHECK(cp.structural_nonzeros() == 62);
  // Epoch-1 transitions 1 - delta store one explicit zero per action.
  CHECK(cp.numerical_nonzeros() == 52);
  CHECK(cp.process_regular());
  CHECK(certify_full_rank(cp));
}

TEST_CASE("block structure of A") {
  std::mt19937_64 rng(3);
  const Model m = random_model(3, 4, {2, 3, 2}, 2, 0.0, rng);
  const CanonicalProgram cp(m);
  const Layout& L = cp.layout();
  const Eigen::MatrixXd& A = cp.dense_A();
  CHECK(Eigen::MatrixXd(cp.A()) == A);

  // Summation block: row s has ones on state s's action columns.
  const int sigma[3][7] = {{1, 1, 0, 0, 0, 0, 0}, {0, 0, 1, 1, 1, 0, 0}, {0, 0, 0, 0, 0, 1, 1}};
  for (int t = 0; t < 3; ++t)
    for (int s = 0; s < 3; ++s)
      for (int c = 0; c < 7; ++c) CHECK(A(L.row(t, s), t * 7 + c) == sigma[s][c]);

  for (int t = 0; t < 3; ++t)
    for (int j = 0; j < 3; ++j)
      for (int s = 0; s < 3; ++s)
        for (int a = 0; a < L.num_actions(s); ++a) {
          CHECK(A(L.row(t + 1, j), L.column(t, s, a)) == -m.transition(t, s, a, j));
          // nothing outside the diagonal and sub-diagonal blocks
          for (int r = 0; r < 4; ++r)
            if (r != t && r != t + 1) CHECK(A(L.row(r, j), L.column(t, s, a)) == 0.0);
        }
  const Eigen::MatrixXd terminal = A.rightCols(3);
  CHECK(terminal.bottomRows(3) == Eigen::MatrixXd::Identity(3, 3));
  CHECK(terminal.topRows(9).isZero(0.0));
  CHECK(cp.structural_nonzeros() == CanonicalProgram::expected_nonzeros(L));

  for (int t = 0; t < 3; ++t)
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < L.num_actions(s); ++a)
        for (int k = 0; k < 2; ++k) CHECK(cp.C()(k, L.column(t, s, a)) == m.reward(t, s, a)[static_cast<std::size_t>(k)]);
}

TEST_CASE("frequency vectors are feasible and C x is the value") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    RandomModelShape shape;
    shape.sparsity = i % 2 ? 0.5 : 0.0;
    shape.num_objectives = 1 + i % 3;
    const Model m = random_model(shape, rng);
    const CanonicalProgram cp(m);
    const Policy pi = random_policy(m.layout(), rng);
    const FrequencyVector x = policy_frequencies(m, pi);
    CHECK((cp.A() * x.coords() - cp.b()).lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK(x.coords().minCoeff() >= 0.0);
    CHECK((cp.C() * x.coords() - evaluate_policy(m, pi).aggregate).lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK(cp.structural_nonzeros() == CanonicalProgram::expected_nonzeros(m.layout()));
  }
}

TEST_CASE("full rank on random models") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    RandomModelShape shape;
    shape.sparsity = 0.7;
    const CanonicalProgram cp(random_model(shape, rng));
    CHECK(certify_full_rank(cp));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(cp.dense_A());
    CHECK(lu.rank() == cp.rows());
  }
}

TEST_CASE("regular bases are unit lower triangular") {
  std::mt19937_64 rng(7);
  const Model m = random_model(3, 4, {2, 3, 2}, 2, 0.4, rng);
  const CanonicalProgram cp(m);
  const Layout& L = cp.layout();
  for (int i = 0; i < 30; ++i) {
    const ActionMap map = random_action_map(L, rng);
    CHECK(is_unit_lower_triangular(cp, map));
    const auto cols = regular_basis_columns(L, map);
    REQUIRE(cols.size() == static_cast<std::size_t>(cp.rows()));
    Eigen::MatrixXd B(cp.rows(), cp.rows());
    for (int p = 0; p < cp.rows(); ++p) B.col(p) = cp.dense_A().col(cols[static_cast<std::size_t>(p)]);
    CHECK(B.diagonal() == Eigen::VectorXd::Ones(cp.rows()));
    CHECK(B.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0));
    CHECK(B.minCoeff() >= -1.0);
  }
}

TEST_CASE("regular basis solve equals the deterministic policy's frequencies") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    RandomModelShape shape;
    shape.sparsity = i % 2 ? 0.6 : 0.0;
    const Model m = random_model(shape, rng);
    const CanonicalProgram cp(m);
    const ActionMap map = random_action_map(m.layout(), rng);
    const FrequencyVector x = regular_basis_solve(cp, map);
    const FrequencyVector y = policy_frequencies(m, Policy::deterministic(m.layout(), map));
    CHECK((x.coords() - y.coords()).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(x.coords().minCoeff() >= 0.0);
    // Basic solution of the selected columns.
    const auto cols = regular_basis_columns(m.layout(), map);
    Eigen::MatrixXd B(cp.rows(), cp.rows());
    for (int p = 0; p < cp.rows(); ++p) B.col(p) = cp.dense_A().col(cols[static_cast<std::size_t>(p)]);
    const Eigen::VectorXd xB = B.lu().solve(cp.b());
    for (int p = 0; p < cp.rows(); ++p) CHECK(std::abs(xB[p] - x.coords()[cols[static_cast<std::size_t>(p)]]) <= 1e-12);
  }
}

TEST_CASE("design example vertex value") {
  const Model m = support::design_example();
  const CanonicalProgram cp(m);
  const FrequencyVector x = regular_basis_solve(cp, support::design_map(m.layout(), {5, 2}, {5, 2}));
  const Eigen::VectorXd v = cp.C() * x.coords();
  CHECK(std::abs(v[0] + 0.72) <= 0.02);
  CHECK(std::abs(v[1] + 0.61) <= 0.02);
}

TEST_CASE("vertex count on regular models") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const Model m = random_model(RandomModelShape{}, rng);
    const CanonicalProgram cp(m);
    REQUIRE(cp.process_regular());
    std::set<std::vector<long long>> vertices;
    std::uint64_t maps = 0;
    for (const auto& map : enumerate_regular_bases(cp)) {
      const FrequencyVector x = regular_basis_solve(cp, map);
      int positive = 0;
      std::vector<long long> key;
      for (Eigen::Index j = 0; j < x.coords().size(); ++j) {
        positive += x.coords()[j] > 1e-10;
        key.push_back(std::llround(x.coords()[j] * 1e9));
      }
      CHECK(positive == cp.rows());
      vertices.insert(key);
      ++maps;
    }
    CHECK(maps == m.layout().deterministic_policy_count());
    CHECK(vertices.size() == maps);
  }
}

TEST_CASE("unreachable pairs give degenerate vertices") {
  std::mt19937_64 rng(10);
  const Model m = support::unreachable_model(rng, 1);
  const CanonicalProgram cp(m);
  CHECK_FALSE(cp.process_regular());
  const ActionMap map(m.layout());
  const FrequencyVector x = regular_basis_solve(cp, map);
  CHECK(x.at(1, 1, 0) == 0.0);
  // Changing the unreachable choice does not move the vertex.
  ActionMap other = map;
  other.at(1, 1) = 1;
  CHECK(same_vertex(x, regular_basis_solve(cp, other)));
}

TEST_CASE("regular basis counts and the guard") {
  auto count = [](const Layout& L) {
    std::uint64_t n = 0;
    std::set<ActionMap> distinct;
    for (const auto& map : RegularBases(L)) {
      ++n;
      distinct.insert(map);
    }
    CHECK(distinct.size() == n);
    return n;
  };
  CHECK(count(Layout(2, 3, {2, 2})) == 16);
  CHECK(count(Layout(2, 3, {5, 5})) == 625);
  CHECK(count(Layout(1, 2, {2})) == 2);

  std::mt19937_64 rng(1);
  const CanonicalProgram big(random_model(4, 5, {10, 10, 10, 10}, 2, 0.0, rng));
  CHECK_THROWS_AS(enumerate_regular_bases(big), ModelError);
  CHECK(enumerate_regular_bases(big, true).size() == 10000000000000000ULL);
}

TEST_CASE("action map indexing") {
  const Layout L(2, 3, {2, 3});
  std::uint64_t i = 0;
  for (const auto& map : RegularBases(L)) CHECK(action_map_from_index(L, i++) == map);
  CHECK(i == 36);
  // the last (s, t) entry varies fastest
  CHECK(action_map_from_index(L, 1) == ActionMap(L, {0, 0, 0, 1}));
  CHECK(action_map_from_index(L, 35) == ActionMap(L, {1, 2, 1, 2}));
}

TEST_CASE("MatrixMarket export") {
  const CanonicalProgram cp(support::design_example());
  std::stringstream a, b, c;
  write_matrix_market_A(cp, a);
  write_matrix_market_b(cp, b);
  write_matrix_market_C(cp, c);

  std::string line;
  std::getline(a, line);
  CHECK(line == "%%MatrixMarket matrix coordinate real general");
  int rows = 0, cols = 0, nnz = 0;
  a >> rows >> cols >> nnz;
  CHECK(rows == 6);
  CHECK(cols == 22);
  CHECK(nnz == cp.structural_nonzeros());
  Eigen::MatrixXd back = Eigen::MatrixXd::Zero(rows, cols);
  for (int e = 0; e < nnz; ++e) {
    int i = 0, j = 0;
    double v = 0;
    a >> i >> j >> v;
    back(i - 1, j - 1) = v;
  }
  CHECK(back == cp.dense_A());

  std::getline(b, line);
  CHECK(line == "%%MatrixMarket matrix array real general");
  b >> rows >> cols;
  CHECK(rows == 6);
  CHECK(cols == 1);
  for (int i = 0; i < 6; ++i) {
    double v = 0;
    b >> v;
    CHECK(v == cp.b()[i]);
  }

  std::getline(c, line);
  c >> rows >> cols;
  CHECK(rows == 2);
  CHECK(cols == 22);
  // array format is column-major
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      double v = 0;
      c >> v;
      CHECK(v == cp.C()(i, j));
    }
}
