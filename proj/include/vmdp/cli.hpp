#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vmdp/model.hpp"
#include "vmdp/report.hpp"

namespace vmdp::cli {

/// Process exit status.
enum ExitCode : int {
  kSuccess = 0,
  kDomainError = 1,    // invalid model, guard exceeded, bad argument values
  kInputError = 2,     // unreadable or malformed input, bad command line
  kInternalError = 3,  // solver inconsistency (e.g. oracle disagreement)
};

struct BenchSpec {
  int k1 = 0;
  int k2 = 0;
};

/// Everything a command needs after argument parsing.
struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string output;      // file for design/generate; prefix for export
  report::Format format = report::Format::Markdown;
  std::uint64_t seed = 1;
  double tolerance = kDefaultModelTolerance;
  bool force = false;
  bool weights = false;
  bool oracle = false;
  bool serial = false;
  std::vector<double> alpha;
  // generate / bench
  int k1 = 5;
  int k2 = 5;
  double rho = 0.7;
  int count = 100;
  std::vector<BenchSpec> groups;
};

/// Parse and run one command line (without the program name).
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Run an already parsed configuration. Throws the library exceptions.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace vmdp::cli
