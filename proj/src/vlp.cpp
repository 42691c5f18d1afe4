#include "vmdp/vlp.hpp"

#include <ostream>

#include "vmdp/error.hpp"

namespace vmdp {

CanonicalProgram::CanonicalProgram(Model model)
    : model_(std::make_shared<const Model>(std::move(model))) {
  const Layout& L = layout();
  const int S = L.num_states();
  const int last = L.horizon() - 1;
  const int k = model_->num_objectives();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(expected_nonzeros(L)));
  C_ = Eigen::MatrixXd::Zero(k, cols());
  for (int t = 0; t < last; ++t) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < L.num_actions(s); ++a) {
        const int col = L.column(t, s, a);
        triplets.emplace_back(L.row(t, s), col, 1.0);
        // Zero probabilities are stored too so the block pattern is complete.
        for (int j = 0; j < S; ++j) triplets.emplace_back(L.row(t + 1, j), col, -model_->transition(t, s, a, j));
        auto r = model_->reward(t, s, a);
        for (int i = 0; i < k; ++i) C_(i, col) = r[static_cast<std::size_t>(i)];
      }
    }
  }
  for (int s = 0; s < S; ++s) {
    const int col = L.terminal_column(s);
    triplets.emplace_back(L.row(last, s), col, 1.0);
    auto r = model_->terminal_reward(s);
    for (int i = 0; i < k; ++i) C_(i, col) = r[static_cast<std::size_t>(i)];
  }
  A_.resize(rows(), cols());
  A_.setFromTriplets(triplets.begin(), triplets.end());
  A_.makeCompressed();
  dense_A_ = Eigen::MatrixXd(A_);

  b_ = Eigen::VectorXd::Zero(rows());
  for (int s = 0; s < S; ++s) b_[s] = model_->alpha()[static_cast<std::size_t>(s)];

  regular_ = regularity_report(*model_).regular;
}

long CanonicalProgram::numerical_nonzeros() const {
  long count = 0;
  for (int j = 0; j < A_.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
      if (it.value() != 0.0) ++count;
  return count;
}

long CanonicalProgram::expected_nonzeros(const Layout& L) {
  const long K = L.total_actions();
  const long S = L.num_states();
  return static_cast<long>(L.num_decision_epochs()) * (K + S * K) + S;
}

CanonicalProgram build_program(const Model& m) { return CanonicalProgram(m); }

std::vector<int> regular_basis_columns(const Layout& L, const ActionMap& actions) {
  std::vector<int> cols;
  cols.reserve(static_cast<std::size_t>(L.num_rows()));
  for (int t = 0; t < L.num_decision_epochs(); ++t)
    for (int s = 0; s < L.num_states(); ++s) cols.push_back(L.column(t, s, actions.at(t, s)));
  for (int s = 0; s < L.num_states(); ++s) cols.push_back(L.terminal_column(s));
  return cols;
}

bool is_unit_lower_triangular(const CanonicalProgram& cp, const ActionMap& actions) {
  const auto cols = regular_basis_columns(cp.layout(), actions);
  if (static_cast<int>(cols.size()) != cp.rows()) return false;
  for (std::size_t pos = 0; pos < cols.size(); ++pos) {
    const auto column = cp.dense_A().col(cols[pos]);
    for (Eigen::Index i = 0; i < column.size(); ++i) {
      const double v = column[i];
      if (i == static_cast<Eigen::Index>(pos)) {
        if (v != 1.0) return false;
      } else if (i < static_cast<Eigen::Index>(pos)) {
        if (v != 0.0) return false;
      } else if (!(v >= -1.0 && v <= 0.0)) {
        return false;
      }
    }
  }
  return true;
}

FrequencyVector regular_basis_solve(const CanonicalProgram& cp, const ActionMap& actions) {
  const auto cols = regular_basis_columns(cp.layout(), actions);
  Eigen::VectorXd residual = cp.b();
  FrequencyVector x(cp.layout());
  for (std::size_t pos = 0; pos < cols.size(); ++pos) {
    const double value = residual[static_cast<Eigen::Index>(pos)];
    x.coords()[cols[pos]] = value;
    if (value == 0.0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(cp.A(), cols[pos]); it; ++it)
      if (it.row() > static_cast<Eigen::Index>(pos)) residual[it.row()] -= it.value() * value;
  }
  return x;
}

bool certify_full_rank(const CanonicalProgram& cp) {
  return is_unit_lower_triangular(cp, ActionMap(cp.layout()));
}

ActionMap action_map_from_index(const Layout& L, std::uint64_t index) {
  ActionMap map(L);
  for (int t = L.num_decision_epochs() - 1; t >= 0; --t)
    for (int s = L.num_states() - 1; s >= 0; --s) {
      const auto k = static_cast<std::uint64_t>(L.num_actions(s));
      map.at(t, s) = static_cast<int>(index % k);
      index /= k;
    }
  if (index != 0) throw ModelError("action map index out of range");
  return map;
}

RegularBases::iterator::iterator(const Layout* layout, bool done)
    : layout_(layout), current_(*layout), done_(done) {}

RegularBases::iterator& RegularBases::iterator::operator++() {
  for (int t = layout_->num_decision_epochs() - 1; t >= 0; --t)
    for (int s = layout_->num_states() - 1; s >= 0; --s) {
      if (++current_.at(t, s) < layout_->num_actions(s)) return *this;
      current_.at(t, s) = 0;
    }
  done_ = true;
  return *this;
}

RegularBases enumerate_regular_bases(const CanonicalProgram& cp, bool force) {
  const auto count = cp.layout().deterministic_policy_count();
  if (count > kRegularBasisLimit && !force)
    throw ModelError("model has " + std::to_string(count) + " regular bases (limit " +
                     std::to_string(kRegularBasisLimit) + "); use --force to proceed");
  return RegularBases(cp.layout());
}

namespace {

void write_array(const Eigen::MatrixXd& M, std::ostream& out) {
  out << "%%MatrixMarket matrix array real general\n" << M.rows() << ' ' << M.cols() << '\n';
  const auto old = out.precision(17);
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i) out << M(i, j) << '\n';
  out.precision(old);
}

}  // namespace

void write_matrix_market_A(const CanonicalProgram& cp, std::ostream& out) {
  const auto& A = cp.A();
  out << "%%MatrixMarket matrix coordinate real general\n"
      << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  const auto old = out.precision(17);
  for (int j = 0; j < A.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, j); it; ++it)
      out << it.row() + 1 << ' ' << j + 1 << ' ' << it.value() << '\n';
  out.precision(old);
}

void write_matrix_market_b(const CanonicalProgram& cp, std::ostream& out) { write_array(cp.b(), out); }

void write_matrix_market_C(const CanonicalProgram& cp, std::ostream& out) { write_array(cp.C(), out); }

}  // namespace vmdp
