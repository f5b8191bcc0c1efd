#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fplab/approximate.hpp"
#include "fplab/operators.hpp"
#include "fplab/params.hpp"

namespace fplab {

enum class Command { VerifyLemma1, VerifyLemma2, VerifyLemma3, Evaluate, Approximate, Selftest };
enum class OutputFormat { Json, Csv };

Command command_from_string(const std::string& name);
std::string command_to_string(Command c);

/// Fully resolved run description. Deserializable from a single JSON file;
/// command-line flags override file values. s and p accept sweeps (arrays).
struct RunConfig {
  static constexpr int schema_version = 1;

  Command command = Command::Selftest;
  std::vector<double> s_values = {0.5};
  std::vector<double> p_values = {2.0};
  int d = 1;
  int k = 0;
  double eps = 0.1;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  QuadratureSpec quadrature;
  ApproxConfig approx;
  double lemma_tol = 1e-6;        // absolute, relative to the 1/(sp) scale for the split check
  double lemma1_rel_tol = 1e-3;
  std::string target = "x1";      // builtin name; ignored when target_polynomial is set
  bool has_target_polynomial = false;
  PolynomialTarget target_polynomial;
  std::vector<std::vector<double>> eval_points;
  std::string output;             // empty = stdout
  OutputFormat format = OutputFormat::Json;
  bool quiet = false;
};

RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& cfg);

/// Dispatches the selected command, writes the report atomically (temp file +
/// rename) when an output path is set, and prints a human summary to `human`
/// unless quiet. Exit status: 0 all checks passed, 1 check failure, 2 config
/// error, 3 numerical non-convergence.
int run(const RunConfig& cfg, std::ostream& human);

}  // namespace fplab
