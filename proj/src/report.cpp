#include "vmdp/report.hpp"

#include <cstdio>
#include <ostream>

#include "vmdp/error.hpp"

namespace vmdp::report {

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "markdown" || name == "md") return Format::Markdown;
  throw ParseError("unknown format '" + name + "' (expected json, csv or markdown)");
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  // "-0.00" -> "0.00"
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string decision_rule(const ActionMap& actions, int t) {
  std::string out = "(";
  for (int s = 0; s < actions.num_states(); ++s) {
    if (s) out += ", ";
    out += std::to_string(actions.at(t, s) + 1);
  }
  return out + ")";
}

namespace {

std::string tuple(const Eigen::VectorXd& v, int decimals) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fixed(v[i], decimals);
  }
  return out + ")";
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

nlohmann::json action_json(const ActionMap& actions) {
  auto d = nlohmann::json::array();
  for (int t = 0; t < actions.num_epochs(); ++t) {
    auto row = nlohmann::json::array();
    for (int s = 0; s < actions.num_states(); ++s) row.push_back(actions.at(t, s));
    d.push_back(row);
  }
  return d;
}

const char* verdict(const OracleComparison& c) { return c.match ? "MATCH" : "MISMATCH"; }

}  // namespace

OracleComparison compare_with_oracle(const EnumerationResult& result, const OracleResult& oracle,
                                     double x_tol, double value_tol) {
  OracleComparison cmp;
  const auto expected = oracle.efficient();
  cmp.enumerated = result.efficient.size();
  cmp.oracle = expected.size();
  if (cmp.enumerated != cmp.oracle) {
    cmp.detail = "enumeration found " + std::to_string(cmp.enumerated) + " efficient vertices, oracle " +
                 std::to_string(cmp.oracle);
    return cmp;
  }
  std::vector<char> used(expected.size(), 0);
  for (const auto& v : result.efficient) {
    bool found = false;
    for (std::size_t i = 0; i < expected.size() && !found; ++i) {
      if (used[i]) continue;
      if ((expected[i]->x.coords() - v.x.coords()).lpNorm<Eigen::Infinity>() > x_tol) continue;
      if ((expected[i]->value - v.value).lpNorm<Eigen::Infinity>() > value_tol) continue;
      used[i] = 1;
      found = true;
    }
    if (!found) {
      cmp.detail = "no oracle vertex matches the enumerated policy with value " + tuple(v.value, 6);
      return cmp;
    }
  }
  cmp.match = true;
  cmp.detail = std::to_string(cmp.enumerated) + " efficient vertices";
  return cmp;
}

nlohmann::json enumeration_to_json(const EnumerationResult& result,
                                   const std::vector<std::optional<WeightCertificate>>* weights,
                                   const std::optional<OracleComparison>& oracle) {
  nlohmann::json j;
  j["num_efficient"] = result.efficient.size();
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < result.efficient.size(); ++i) {
    const auto& v = result.efficient[i];
    nlohmann::json row;
    row["id"] = i + 1;
    row["d"] = action_json(v.actions);
    row["value"] = to_vector(v.value);
    if (weights) {
      const auto& w = (*weights)[i];
      if (w) {
        row["weights"] = to_vector(w->weights);
        row["kkt_residual"] = w->kkt_residual;
        row["scalarized_value"] = w->scalarized_value;
        row["resolved_optimum"] = w->resolved_optimum;
      } else {
        row["weights"] = nullptr;
      }
    }
    rows.push_back(row);
  }
  j["policies"] = rows;
  const auto& s = result.stats;
  j["stats"] = {{"vertices_visited", s.vertices_visited}, {"efficiency_tests", s.efficiency_tests},
                {"pivots", s.pivots},                     {"degenerate_moves", s.degenerate_moves},
                {"cache_hits", s.cache_hits}};
  if (oracle) j["oracle"] = {{"verdict", verdict(*oracle)}, {"detail", oracle->detail}};
  return j;
}

void write_enumeration(const EnumerationResult& result,
                       const std::vector<std::optional<WeightCertificate>>* weights,
                       const std::optional<OracleComparison>& oracle, Format format, std::ostream& out) {
  if (format == Format::Json) {
    out << enumeration_to_json(result, weights, oracle).dump(2) << '\n';
    return;
  }
  const int epochs = result.efficient.empty() ? 0 : result.efficient.front().actions.num_epochs();
  const int k = result.efficient.empty() ? 0 : static_cast<int>(result.efficient.front().value.size());

  if (format == Format::Csv) {
    out << "policy";
    for (int t = 0; t < epochs; ++t) out << ",pi_" << t + 1;
    for (int i = 0; i < k; ++i) out << ",v_" << i + 1;
    if (weights)
      for (int i = 0; i < k; ++i) out << ",p_" << i + 1;
    out << '\n';
    for (std::size_t r = 0; r < result.efficient.size(); ++r) {
      const auto& v = result.efficient[r];
      out << r + 1;
      for (int t = 0; t < epochs; ++t) out << ",\"" << decision_rule(v.actions, t) << '"';
      for (int i = 0; i < k; ++i) out << ',' << fixed(v.value[i], 6);
      if (weights) {
        const auto& w = (*weights)[r];
        for (int i = 0; i < k; ++i) out << ',' << (w ? fixed(w->weights[i], 6) : "");
      }
      out << '\n';
    }
    if (oracle) out << "# oracle: " << verdict(*oracle) << " (" << oracle->detail << ")\n";
    return;
  }

  out << "| Policy |";
  for (int t = 0; t < epochs; ++t) out << " pi_" << t + 1 << " |";
  out << " Value |";
  if (weights) out << " Weights |";
  out << "\n|---|";
  for (int t = 0; t < epochs; ++t) out << "---|";
  out << "---|";
  if (weights) out << "---|";
  out << '\n';
  for (std::size_t r = 0; r < result.efficient.size(); ++r) {
    const auto& v = result.efficient[r];
    out << "| " << r + 1 << " |";
    for (int t = 0; t < epochs; ++t) out << ' ' << decision_rule(v.actions, t) << " |";
    out << ' ' << tuple(v.value, 2) << " |";
    if (weights) {
      const auto& w = (*weights)[r];
      out << ' ' << (w ? tuple(w->weights, 2) : std::string("none")) << " |";
    }
    out << '\n';
  }
  const auto& s = result.stats;
  out << '\n'
      << result.efficient.size() << " efficient deterministic policies (" << s.vertices_visited
      << " vertices visited, " << s.efficiency_tests << " efficiency tests, " << s.pivots << " pivots)\n";
  if (oracle) out << "oracle: " << verdict(*oracle) << " (" << oracle->detail << ")\n";
}

void write_oracle(const OracleResult& oracle, Format format, std::ostream& out) {
  const auto efficient = oracle.efficient();
  if (format == Format::Json) {
    nlohmann::json j;
    j["policies_evaluated"] = oracle.policies_evaluated;
    j["vertices"] = oracle.vertices.size();
    auto rows = nlohmann::json::array();
    for (const auto* e : efficient)
      rows.push_back({{"d", action_json(e->actions)},
                      {"value", to_vector(e->value)},
                      {"equivalent_policies", e->equivalent_policies}});
    j["efficient"] = rows;
    out << j.dump(2) << '\n';
    return;
  }
  const int epochs = efficient.empty() ? 0 : efficient.front()->actions.num_epochs();
  const int k = efficient.empty() ? 0 : static_cast<int>(efficient.front()->value.size());
  if (format == Format::Csv) {
    out << "policy";
    for (int t = 0; t < epochs; ++t) out << ",pi_" << t + 1;
    for (int i = 0; i < k; ++i) out << ",v_" << i + 1;
    out << ",equivalent_policies\n";
    for (std::size_t r = 0; r < efficient.size(); ++r) {
      out << r + 1;
      for (int t = 0; t < epochs; ++t) out << ",\"" << decision_rule(efficient[r]->actions, t) << '"';
      for (int i = 0; i < k; ++i) out << ',' << fixed(efficient[r]->value[i], 6);
      out << ',' << efficient[r]->equivalent_policies << '\n';
    }
    return;
  }
  out << "| Policy |";
  for (int t = 0; t < epochs; ++t) out << " pi_" << t + 1 << " |";
  out << " Value | Equivalent policies |\n|---|";
  for (int t = 0; t < epochs; ++t) out << "---|";
  out << "---|---|\n";
  for (std::size_t r = 0; r < efficient.size(); ++r) {
    out << "| " << r + 1 << " |";
    for (int t = 0; t < epochs; ++t) out << ' ' << decision_rule(efficient[r]->actions, t) << " |";
    out << ' ' << tuple(efficient[r]->value, 2) << " | " << efficient[r]->equivalent_policies << " |\n";
  }
  out << '\n'
      << oracle.policies_evaluated << " deterministic policies, " << oracle.vertices.size() << " distinct vertices, "
      << efficient.size() << " efficient\n";
}

}  // namespace vmdp::report
