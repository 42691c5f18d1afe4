#include "vmdp/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "vmdp/bench.hpp"
#include "vmdp/error.hpp"
#include "vmdp/io.hpp"
#include "vmdp/pareto.hpp"
#include "vmdp/vlp.hpp"

namespace vmdp::cli {

namespace {

using nlohmann::json;
using report::Format;

Model load_valid_model(const RunConfig& cfg) {
  Model m = io::read_model_file(cfg.inputs.at(0));
  require_valid(m, cfg.tolerance);
  return m;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const Model m = io::read_model_file(cfg.inputs.at(0));
  const auto report = validate_model(m, cfg.tolerance);
  if (cfg.format == Format::Json) {
    out << json{{"ok", report.ok()}, {"violations", report.violations}}.dump(2) << '\n';
  } else if (report.ok()) {
    out << "ok\n";
  } else {
    for (const auto& v : report.violations) out << "violation: " << v << '\n';
  }
  return report.ok() ? kSuccess : kDomainError;
}

int cmd_info(const RunConfig& cfg, std::ostream& out) {
  const CanonicalProgram cp(load_valid_model(cfg));
  const Layout& L = cp.layout();
  const auto reg = regularity_report(cp.model());
  const auto count = L.deterministic_policy_count();
  const auto actions = L.actions_per_state();

  json j{{"num_states", L.num_states()},
         {"horizon", L.horizon()},
         {"num_objectives", cp.num_objectives()},
         {"actions_per_state", std::vector<int>(actions.begin(), actions.end())},
         {"total_actions", L.total_actions()},
         {"rows", cp.rows()},
         {"columns", cp.cols()},
         {"nonzeros", cp.structural_nonzeros()},
         {"numerical_nonzeros", cp.numerical_nonzeros()},
         {"full_rank", certify_full_rank(cp)},
         {"regular", reg.regular},
         {"deterministic_policies", count}};
  // Witnesses are reported 1-based like the other user-facing indices.
  if (reg.some_policy_witness) {
    std::vector<int> acts;
    for (int a : reg.some_policy_witness->predecessor_actions) acts.push_back(a + 1);
    j["some_policy_witness"] = {{"state", reg.some_policy_witness->target.state + 1},
                                {"epoch", reg.some_policy_witness->target.epoch + 1},
                                {"predecessor_actions", acts}};
  }
  if (reg.all_policy_witness)
    j["all_policy_witness"] = {{"state", reg.all_policy_witness->state + 1},
                               {"epoch", reg.all_policy_witness->epoch + 1}};

  if (cfg.format == Format::Json) {
    out << j.dump(2) << '\n';
    return kSuccess;
  }
  if (cfg.format == Format::Csv) {
    out << "key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!it->is_structured()) out << it.key() << ',' << it->dump() << '\n';
    return kSuccess;
  }
  out << "S = " << L.num_states() << ", T = " << L.horizon() << ", k = " << cp.num_objectives() << '\n'
      << "actions per state: " << j["actions_per_state"].dump() << " (K = " << L.total_actions() << ")\n"
      << "m = " << cp.rows() << ", n = " << cp.cols() << ", nonzeros = " << cp.structural_nonzeros() << " ("
      << cp.numerical_nonzeros() << " numerically nonzero)\n"
      << "rank(A) = m: " << (certify_full_rank(cp) ? "certified" : "not certified") << '\n'
      << "regular: " << (reg.regular ? "true" : "false") << '\n';
  if (reg.some_policy_witness)
    out << "  some policies miss state " << reg.some_policy_witness->target.state + 1 << " at epoch "
        << reg.some_policy_witness->target.epoch + 1 << " (predecessor actions "
        << j["some_policy_witness"]["predecessor_actions"].dump() << ")\n";
  if (reg.all_policy_witness)
    out << "  every policy misses state " << reg.all_policy_witness->state + 1 << " at epoch "
        << reg.all_policy_witness->epoch + 1 << '\n';
  out << "deterministic policies: " << count << '\n';
  return kSuccess;
}

int cmd_enumerate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const CanonicalProgram cp(load_valid_model(cfg));
  const EnumerateOptions options{cfg.force};
  const auto result = cfg.serial ? enumerate_efficient_serial(cp, options) : enumerate_efficient(cp, options);

  int status = kSuccess;
  std::vector<std::optional<WeightCertificate>> weights;
  if (cfg.weights) {
    for (const auto& v : result.efficient) {
      weights.push_back(recover_weights(cp, v));
      if (!weights.back()) {
        err << "error: no positive weights for efficient policy " << weights.size()
            << " (efficiency test inconsistency)\n";
        status = kInternalError;
      }
    }
  }
  std::optional<report::OracleComparison> comparison;
  if (cfg.oracle) {
    comparison = report::compare_with_oracle(result, brute_force_oracle(cp.model()));
    if (!comparison->match) status = kInternalError;
  }
  report::write_enumeration(result, cfg.weights ? &weights : nullptr, comparison, cfg.format, out);
  return status;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const Model m = load_valid_model(cfg);
  const Policy pi = io::policy_from_json(m.layout(), io::read_json_file(cfg.inputs.at(1)));
  const auto check = validate_policy(pi, cfg.tolerance);
  if (!check.ok()) {
    std::string msg = "invalid policy:";
    for (const auto& v : check.violations) msg += "\n  " + v;
    throw ModelError(msg);
  }
  const auto value = evaluate_policy(m, pi);
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  if (cfg.format == Format::Json) {
    json per_state = json::array();
    for (const auto& v : value.per_state) per_state.push_back(vec(v));
    out << json{{"aggregate", vec(value.aggregate)}, {"per_state", per_state}}.dump(2) << '\n';
    return kSuccess;
  }
  const bool csv = cfg.format == Format::Csv;
  const int decimals = csv ? 6 : 4;
  if (csv) {
    out << "state";
    for (int i = 0; i < m.num_objectives(); ++i) out << ",v_" << i + 1;
    out << '\n';
  }
  auto line = [&](const std::string& label, const Eigen::VectorXd& v) {
    out << label << (csv ? "" : ":");
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (csv ? "," : " ") << report::fixed(v[i], decimals);
    out << '\n';
  };
  for (int s = 0; s < m.num_states(); ++s)
    line(csv ? std::to_string(s + 1) : "state " + std::to_string(s + 1), value.per_state[static_cast<std::size_t>(s)]);
  line("aggregate", value.aggregate);
  return kSuccess;
}

DesignInstance read_design(const std::string& path) {
  if (path == "-") return io::design_from_csv(std::cin);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return io::design_from_csv(in);
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output);
  if (!file || !(file << text)) throw ParseError("cannot write " + cfg.output);
}

int cmd_design(const RunConfig& cfg, std::ostream& out) {
  std::optional<std::vector<double>> alpha;
  if (!cfg.alpha.empty()) alpha = cfg.alpha;
  const Model m = build_design_model(read_design(cfg.inputs.at(0)), alpha);
  require_valid(m, cfg.tolerance);
  emit(cfg, out, io::model_to_json(m).dump(2) + "\n");
  return kSuccess;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  std::ostringstream csv;
  io::design_to_csv(generate_random_instance(cfg.k1, cfg.k2, cfg.rho, cfg.seed), csv);
  emit(cfg, out, csv.str());
  return kSuccess;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  std::vector<BenchSpec> groups = cfg.groups;
  if (groups.empty()) groups.push_back({cfg.k1, cfg.k2});
  std::vector<BenchGroupResult> results;
  for (const auto& g : groups) results.push_back(run_bench_group(g.k1, g.k2, cfg.rho, cfg.count, cfg.seed));
  write_bench(results, cfg.format, out);
  return kSuccess;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  report::write_oracle(brute_force_oracle(load_valid_model(cfg)), cfg.format, out);
  return kSuccess;
}

int cmd_export(const RunConfig& cfg, std::ostream& out) {
  const CanonicalProgram cp(load_valid_model(cfg));
  const std::string prefix = cfg.output.empty() ? "program" : cfg.output;
  auto write = [&](const std::string& suffix, void (*fn)(const CanonicalProgram&, std::ostream&)) {
    const std::string path = prefix + suffix;
    std::ofstream file(path);
    if (!file) throw ParseError("cannot write " + path);
    fn(cp, file);
    out << "wrote " << path << '\n';
  };
  write("_A.mtx", write_matrix_market_A);
  write("_b.mtx", write_matrix_market_b);
  write("_C.mtx", write_matrix_market_C);
  return kSuccess;
}

BenchSpec parse_group(const std::string& text) {
  BenchSpec g;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> g.k1 >> comma >> g.k2) || comma != ',' || !in.eof() || g.k1 < 1 || g.k2 < 1)
    throw CLI::ValidationError("--group", "expected K1,K2 with positive integers, got '" + text + "'");
  return g;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.tolerance > 0.0)) throw ModelError("--tol must be positive");
  const auto& c = cfg.command;
  if (c == "validate") return cmd_validate(cfg, out);
  if (c == "info") return cmd_info(cfg, out);
  if (c == "enumerate") return cmd_enumerate(cfg, out, err);
  if (c == "evaluate") return cmd_evaluate(cfg, out);
  if (c == "design") return cmd_design(cfg, out);
  if (c == "generate") return cmd_generate(cfg, out);
  if (c == "bench") return cmd_bench(cfg, out);
  if (c == "oracle") return cmd_oracle(cfg, out);
  if (c == "export") return cmd_export(cfg, out);
  throw ParseError("unknown command '" + c + "'");
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Efficient deterministic policies of finite-horizon vector MDPs", "vmdp"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "markdown";
  std::vector<std::string> groups;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "markdown", "md"}))
        ->capture_default_str();
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tolerance, "Tolerance for probability sums")->capture_default_str();
  };
  auto add_model = [&](CLI::App* sub) { sub->add_option("model", cfg.inputs, "Model JSON file")->required(); };

  auto* validate = app.add_subcommand("validate", "Check the model axioms");
  add_model(validate);
  add_tol(validate);
  add_format(validate);

  auto* info = app.add_subcommand("info", "Dimensions, regularity and policy count");
  add_model(info);
  add_tol(info);
  add_format(info);

  auto* enumerate = app.add_subcommand("enumerate", "List all efficient deterministic policies");
  add_model(enumerate);
  add_tol(enumerate);
  add_format(enumerate);
  enumerate->add_flag("--weights", cfg.weights, "Recover scalarization weights for each policy");
  enumerate->add_flag("--oracle", cfg.oracle, "Cross-check against brute-force enumeration");
  enumerate->add_flag("--force", cfg.force, "Skip the regular-basis count guard");
  enumerate->add_flag("--serial", cfg.serial, "Use the single-threaded walk");

  auto* evaluate = app.add_subcommand("evaluate", "Value of a policy");
  evaluate->add_option("files", cfg.inputs, "Model JSON file and policy JSON file")->required()->expected(2);
  add_tol(evaluate);
  add_format(evaluate);

  auto* design = app.add_subcommand("design", "Build the two-component design model from a CSV");
  design->add_option("csv", cfg.inputs, "Design CSV (component,alternative,cost,reliability) or -")->required();
  design->add_option("--alpha", cfg.alpha, "Initial distribution over the two components")->expected(2);
  design->add_option("-o,--output", cfg.output, "Write the model here instead of stdout");
  add_tol(design);

  auto* generate = app.add_subcommand("generate", "Random design instance as CSV");
  generate->add_option("--k1", cfg.k1, "Alternatives for component 1")->capture_default_str();
  generate->add_option("--k2", cfg.k2, "Alternatives for component 2")->capture_default_str();
  generate->add_option("--rho", cfg.rho, "Cost/reliability correlation")->capture_default_str();
  generate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  generate->add_option("-o,--output", cfg.output, "Write the CSV here instead of stdout");

  auto* bench = app.add_subcommand("bench", "Efficient-set sizes over random design instances");
  bench->add_option("--group", groups, "Group as K1,K2 (repeatable)");
  bench->add_option("--rho", cfg.rho, "Cost/reliability correlation")->capture_default_str();
  bench->add_option("--count", cfg.count, "Instances per group")->capture_default_str();
  bench->add_option("--seed", cfg.seed, "Seed of instance 1; instance i uses seed + i - 1")->capture_default_str();
  add_format(bench);

  auto* oracle = app.add_subcommand("oracle", "Brute-force efficient set");
  add_model(oracle);
  add_tol(oracle);
  add_format(oracle);

  auto* exporter = app.add_subcommand("export", "Write A, b and C as MatrixMarket files");
  add_model(exporter);
  add_tol(exporter);
  exporter->add_option("--prefix", cfg.output, "Output path prefix")->capture_default_str();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
    for (const auto& g : groups) cfg.groups.push_back(parse_group(g));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = report::parse_format(format);

  try {
    return execute(cfg, out, err);
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace vmdp::cli
