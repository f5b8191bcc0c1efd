// Command-line surface of the laboratory: lemma verification, operator
// evaluation, end-to-end approximation, and the selftest suite.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fplab/runner.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<double> s_values;
  std::vector<double> p_values;
  int d = -1;
  int k = -1;
  double eps = -1.0;
  long long seed = -1;
  std::string target;
  std::vector<double> x_point;
  std::string output;
  std::string format;
  bool quiet = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its values");
  cmd->add_option("--s", f.s_values, "operator order(s) s in (0,1); repeat for a sweep");
  cmd->add_option("--p", f.p_values, "exponent(s) p in (1,inf); repeat for a sweep");
  cmd->add_option("--d", f.d, "ambient dimension");
  cmd->add_option("--k", f.k, "derivative order of the C^k target norm");
  cmd->add_option("--eps", f.eps, "requested approximation accuracy");
  cmd->add_option("--seed", f.seed, "seed for direction sampling and test points");
  cmd->add_option("--target", f.target, "target/builtin field name");
  cmd->add_option("--x", f.x_point, "evaluation point (one coordinate per value)");
  cmd->add_option("--output", f.output, "report file path (stdout when omitted)");
  cmd->add_option("--format", f.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--quiet", f.quiet, "suppress the human summary on stderr");
}

int dispatch(const std::string& command, const CommonFlags& f) {
  fplab::RunConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) {
      std::cerr << "config error: cannot open " << f.config_path << "\n";
      return 2;
    }
    std::ostringstream buf;
    buf << is.rdbuf();
    try {
      cfg = fplab::run_config_from_json(buf.str());
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
  }
  try {
    cfg.command = fplab::command_from_string(command);
    if (!f.s_values.empty()) cfg.s_values = f.s_values;
    if (!f.p_values.empty()) cfg.p_values = f.p_values;
    if (f.d > 0) cfg.d = f.d;
    if (f.k >= 0) cfg.k = f.k;
    if (f.eps > 0.0) cfg.eps = f.eps;
    if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
    if (!f.target.empty()) cfg.target = f.target;
    if (!f.x_point.empty()) cfg.eval_points = {f.x_point};
    if (!f.output.empty()) cfg.output = f.output;
    if (f.format == "csv") cfg.format = fplab::OutputFormat::Csv;
    if (f.format == "json") cfg.format = fplab::OutputFormat::Json;
    if (f.quiet) cfg.quiet = true;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return fplab::run(cfg, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fplab: numerical laboratory for a nonlocal nonlinear operator and its span(M) approximations"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"verify-lemma1", "verify-lemma2", "verify-lemma3",
                                             "evaluate", "approximate", "selftest"};
  std::map<std::string, CommonFlags> flags;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    add_common_flags(sub, flags[name]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage problems are configuration errors
  }

  for (const auto& name : commands) {
    if (app.got_subcommand(name)) return dispatch(name, flags[name]);
  }
  std::cerr << "config error: no command selected\n";
  return 2;
}
