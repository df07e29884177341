#include "hetnet/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

template <typename T>
T number(std::string_view key, std::string_view text) {
  T value{};
  const auto t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                      std::string(text) + "' as a number");
  }
  return value;
}

std::string format(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kSimulate:
      return "simulate";
    case Mode::kAnalytic:
      return "analytic";
    case Mode::kBoth:
      return "both";
  }
  return {};
}

Mode parse_mode(std::string_view text) {
  if (text == "simulate" || text == "sim") return Mode::kSimulate;
  if (text == "analytic") return Mode::kAnalytic;
  if (text == "both") return Mode::kBoth;
  throw ConfigError("mode: expected simulate, analytic or both, got '" + std::string(text) +
                    "'");
}

std::vector<double> RunConfig::axis_values() const {
  if (!values.empty()) return values;
  switch (axis) {
    case SweepAxis::kEpsilon:
      return {params.epsilon};
    case SweepAxis::kLambdaSbs:
      return {params.lambda_sbs};
    case SweepAxis::kK:
      return {1.0};
    case SweepAxis::kBeta:
      return {params.beta_db};
  }
  return {};
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  auto& p = c.params;
  try {
    if (key == "schema_version") {
      c.schema_version = number<int>(key, value);
    } else if (key == "lambda_mbs") {
      p.lambda_mbs = number<double>(key, value);
    } else if (key == "lambda_sbs") {
      p.lambda_sbs = number<double>(key, value);
    } else if (key == "alpha") {
      p.alpha = number<double>(key, value);
    } else if (key == "epsilon") {
      p.epsilon = number<double>(key, value);
    } else if (key == "p_default_dbm") {
      p.p_default_dbm = number<double>(key, value);
    } else if (key == "p_max_dbm") {
      p.p_max_dbm = number<double>(key, value);
    } else if (key == "beta_db") {
      p.beta_db = number<double>(key, value);
    } else if (key == "fpc_anchor") {
      if (value == "own_mbs") {
        p.fpc_anchor = FpcAnchor::kOwnMbs;
      } else if (value == "serving_node") {
        p.fpc_anchor = FpcAnchor::kServingNode;
      } else {
        throw ConfigError("expected own_mbs or serving_node");
      }
    } else if (key == "schemes") {
      c.schemes.clear();
      for (auto s : split_list(value)) c.schemes.push_back(Scheme::parse(s));
    } else if (key == "axis") {
      c.axis = parse_axis(value);
    } else if (key == "values") {
      c.values.clear();
      for (auto v : split_list(value)) c.values.push_back(number<double>(key, v));
    } else if (key == "n_realizations") {
      c.n_realizations = number<long long>(key, value);
    } else if (key == "seed") {
      c.seed = number<std::uint64_t>(key, value);
    } else if (key == "window_side") {
      c.window_side = number<double>(key, value);
    } else if (key == "workers") {
      c.workers = number<unsigned>(key, value);
    } else if (key == "out") {
      c.out = std::string(value);
    } else if (key == "mode") {
      c.mode = parse_mode(value);
    } else if (key == "closed_form") {
      if (value != "auto" && value != "true" && value != "false") {
        throw ConfigError("expected auto, true or false");
      }
      c.closed_form = std::string(value);
    } else {
      throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.starts_with("config key") || msg.starts_with("unknown config key")) throw;
    throw ConfigError("config key '" + std::string(key) + "': " + msg);
  } catch (const ParameterError& e) {
    throw ConfigError("config key '" + std::string(key) + "': " + e.what());
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(view.substr(0, eq)));
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                        "'");
    }
    apply_setting(config, key, view.substr(eq + 1));
  }
  if (!seen.contains("schema_version")) {
    throw ConfigError("config: missing schema_version");
  }
  if (config.schema_version != kConfigSchemaVersion) {
    throw ConfigError("config: unsupported schema_version " +
                      std::to_string(config.schema_version));
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_text(const RunConfig& c) {
  std::ostringstream out;
  const auto& p = c.params;
  out << "schema_version = " << c.schema_version << '\n'
      << "lambda_mbs = " << format(p.lambda_mbs) << '\n'
      << "lambda_sbs = " << format(p.lambda_sbs) << '\n'
      << "alpha = " << format(p.alpha) << '\n'
      << "epsilon = " << format(p.epsilon) << '\n'
      << "p_default_dbm = " << format(p.p_default_dbm) << '\n'
      << "p_max_dbm = " << format(p.p_max_dbm) << '\n'
      << "beta_db = " << format(p.beta_db) << '\n'
      << "fpc_anchor = "
      << (p.fpc_anchor == FpcAnchor::kOwnMbs ? "own_mbs" : "serving_node") << '\n';
  out << "schemes = ";
  for (std::size_t i = 0; i < c.schemes.size(); ++i) {
    out << (i ? ", " : "") << c.schemes[i].name();
  }
  out << '\n' << "axis = " << to_string(c.axis) << '\n' << "values = ";
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    out << (i ? ", " : "") << format(c.values[i]);
  }
  out << '\n'
      << "n_realizations = " << c.n_realizations << '\n'
      << "seed = " << c.seed << '\n'
      << "window_side = " << format(c.window_side) << '\n'
      << "workers = " << c.workers << '\n'
      << "out = " << c.out << '\n'
      << "mode = " << to_string(c.mode) << '\n'
      << "closed_form = " << c.closed_form << '\n';
  return out.str();
}

void validate(const RunConfig& c) {
  auto field = [](const char* name, const std::string& why) {
    return ConfigError("config field '" + std::string(name) + "': " + why);
  };
  try {
    c.params.validate();
  } catch (const ParameterError& e) {
    // parameter messages lead with the offending field name
    const std::string msg = e.what();
    throw field(msg.substr(0, msg.find(' ')).c_str(), msg);
  }
  if (c.schemes.empty()) throw field("schemes", "at least one scheme is required");
  if (c.n_realizations < 2) throw field("n_realizations", "must be at least 2");
  if (!(c.window_side > 0.0) || !std::isfinite(c.window_side)) {
    throw field("window_side", "must be positive");
  }
  if (c.out.empty()) throw field("out", "output path is empty");
  const auto values = c.axis_values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    try {
      apply_axis(c.params, c.axis, values[i]);
    } catch (const ParameterError& e) {
      throw field("values", "entry " + std::to_string(i) + " (" + format(values[i]) +
                                "): " + e.what());
    }
  }
}

}  // namespace hetnet
