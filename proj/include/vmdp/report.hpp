#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "vmdp/pareto.hpp"

namespace vmdp::report {

enum class Format { Json, Csv, Markdown };

/// "json", "csv" or "markdown"; ParseError otherwise.
Format parse_format(const std::string& name);

/// Decision rule of epoch t as "(a_1, a_2, ...)", 1-based actions.
std::string decision_rule(const ActionMap& actions, int t);

/// Enumeration output compared against the oracle: same number of efficient
/// vertices and a one-to-one match of frequency vectors (max-norm x_tol) with
/// value vectors within value_tol.
struct OracleComparison {
  bool match = false;
  std::size_t enumerated = 0;
  std::size_t oracle = 0;
  std::string detail;
};

OracleComparison compare_with_oracle(const EnumerationResult& result, const OracleResult& oracle,
                                     double x_tol = 1e-8, double value_tol = 1e-6);

/// One row per efficient policy in discovery order: id, one column per
/// decision epoch, value vector, and weights when given. CSV values use 6
/// decimals, markdown 2.
void write_enumeration(const EnumerationResult& result,
                       const std::vector<std::optional<WeightCertificate>>* weights,
                       const std::optional<OracleComparison>& oracle, Format format, std::ostream& out);

nlohmann::json enumeration_to_json(const EnumerationResult& result,
                                   const std::vector<std::optional<WeightCertificate>>* weights,
                                   const std::optional<OracleComparison>& oracle);

void write_oracle(const OracleResult& oracle, Format format, std::ostream& out);

/// Fixed-point formatting with `decimals` places; negative zero prints as 0.
std::string fixed(double v, int decimals);

}  // namespace vmdp::report
