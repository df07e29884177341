#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/association.hpp"
#include "hetnet/params.hpp"
#include "hetnet/simulator.hpp"

namespace hetnet {

enum class Mode { kSimulate, kAnalytic, kBoth };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

inline constexpr int kConfigSchemaVersion = 1;

/// Everything a CLI run needs. Text form is one `key = value` per line with
/// `#` comments; lists are comma-separated. Unknown keys are rejected.
///
///   schema_version = 1
///   lambda_mbs = 0.01        lambda_sbs = 0.02      alpha = 4
///   epsilon = 0.5            p_default_dbm = 30     p_max_dbm = 50
///   beta_db = 0              fpc_anchor = own_mbs | serving_node
///   schemes = DA, SA         axis = epsilon | lambda_sbs | k | beta
///   values = 0, 0.5, 1       (empty: the base value of the axis)
///   n_realizations = 2000    seed = 1               window_side = 100
///   workers = 0              out = results.csv
///   mode = simulate | analytic | both
///   closed_form = auto | true | false
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  SystemParams params;
  std::vector<Scheme> schemes{Scheme::dual()};
  SweepAxis axis = SweepAxis::kBeta;
  std::vector<double> values;
  Index n_realizations = 2000;
  std::uint64_t seed = 1;
  double window_side = 100.0;
  unsigned workers = 0;
  std::string out = "results.csv";
  Mode mode = Mode::kSimulate;
  /// "auto" adds closed-form rows wherever alpha = 4 and epsilon = 0.
  std::string closed_form = "auto";

  /// Sweep values, or the single base value of the axis when none are set.
  std::vector<double> axis_values() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Sets one key from its text value. Throws ConfigError naming the key.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Parses the text form; `schema_version` is required.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

std::string to_text(const RunConfig& config);

/// Cross-field checks; throws ConfigError naming the offending field.
void validate(const RunConfig& config);

}  // namespace hetnet
