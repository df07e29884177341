#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/config.hpp"
#include "hetnet/result_table.hpp"

namespace hetnet {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitNumericError = 3,
};

/// Simulated rows (and analytic rows when config.mode asks for them).
ResultTable run_simulate(const RunConfig& config, std::ostream* log = nullptr);

/// Analytic rows for the schemes that have an analytic form (DA, KPLUS1_0,
/// KPLUS1_1), plus closed-form rows per config.closed_form.
ResultTable run_analytic(const RunConfig& config, std::ostream* log = nullptr);

inline const std::vector<std::string> kFigurePresets = {"fig2", "fig3", "fig4", "fig5"};

/// Runs composing a figure preset. Preset-fixed fields (axis, values, schemes,
/// lambda_sbs, beta_db, p_max_dbm as applicable) overwrite `base`; all other
/// fields (budget, seed, epsilon, mode, ...) are taken from `base`.
std::vector<RunConfig> figure_preset(std::string_view figure, const RunConfig& base);

ResultTable run_reproduce(std::string_view figure, const RunConfig& base,
                          std::ostream* log = nullptr);

/// Entry point of the `hetnet` tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hetnet
