#pragma once

// Command-line front end. Every subcommand writes to caller-supplied streams
// so the whole tool can be driven in-process.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace expode::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNonFinite = 2,
  kNewtonDivergence = 3,
  kStepUnderflow = 4,
  kRuntime = 5,
};

/// Bad flag combination or value; maps to kUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string scheme = "explicit";  ///< explicit | implicit | astable2 | lstable2
  std::optional<int> n;

  std::string problem = "decay";
  std::optional<double> parameter;
  std::optional<double> t_final;

  std::optional<double> h;
  bool adaptive = false;
  double rtol = 1e-6;
  double atol = 1e-6;

  int levels = 6;
  bool local = false;

  double re_min = -20.0, re_max = 2.0, im_min = -10.0, im_max = 10.0;
  int width = 221;
  int height = 201;

  int n_max = 16;

  std::string output;  ///< empty: standard output
  std::string doc;     ///< stability document path; empty: standard output
};

/// Checks the selector rules: n is required for explicit/implicit and
/// rejected for the fixed tableaux.
void validate_scheme(const RunConfig& config);

int cmd_tableau(const RunConfig& config, std::ostream& out);
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_convergence(const RunConfig& config, std::ostream& out);
int cmd_stability(const RunConfig& config, std::ostream& out);
int cmd_orthocheck(const RunConfig& config, std::ostream& out);

/// Parses `args` (without the program name), dispatches and maps errors to
/// exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, shortest of fixed/scientific, '.' separator.
std::string format_number(double value);

/// Minified JSON with sorted keys and numbers through format_number.
std::string canonical_json(const nlohmann::json& document);

}  // namespace expode::cli
