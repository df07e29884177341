#include "hetnet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/simulator.hpp"

namespace hetnet {

namespace {

SimulationOptions sim_options(const RunConfig& c) {
  return {c.window_side, c.workers};
}

bool closed_form_applies(const SystemParams& p) { return p.alpha == 4.0 && p.epsilon == 0.0; }

void write_table(const ResultTable& table, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  write_csv(file, table);
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

void append(ResultTable& into, const ResultTable& from) {
  into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
}

}  // namespace

ResultTable run_analytic(const RunConfig& config, std::ostream* log) {
  validate(config);
  const auto values = config.axis_values();
  const bool k_axis = config.axis == SweepAxis::kK;

  if (config.closed_form == "true") {
    for (double v : values) {
      if (!closed_form_applies(apply_axis(config.params, config.axis, v))) {
        throw ConfigError(
            "closed form requested but it only holds for alpha = 4 and epsilon = 0");
      }
    }
  }

  ResultTable table;
  for (double v : values) {
    const SystemParams p = apply_axis(config.params, config.axis, v);
    std::vector<Scheme> schemes =
        k_axis ? std::vector<Scheme>{Scheme::k_plus_one(static_cast<int>(v))} : config.schemes;

    std::optional<DoubleAssociationModel> model;
    std::optional<double> mbs, da;
    for (const Scheme& scheme : schemes) {
      const bool mbs_only = scheme.kind() == Scheme::Kind::kKPlusOne && scheme.sbs_count() == 0;
      const bool dual = scheme.kind() != Scheme::Kind::kSingle && scheme.sbs_count() == 1;
      if (!mbs_only && !dual) {
        if (log) *log << "analytic: no analytic form for " << scheme.name() << ", skipped\n";
        continue;
      }
      if (!model) model.emplace(AnalyticParams::from(p));
      double value = 0.0;
      if (mbs_only) {
        if (!mbs) mbs = model->mbs_success().value;
        value = *mbs;
      } else {
        if (!da) da = model->da_success().value;
        value = *da;
      }
      CurvePoint row;
      row.scheme = scheme.name();
      row.axis_name = std::string(to_string(config.axis));
      row.axis_value = v;
      row.beta_db = p.beta_db;
      row.epsilon = p.epsilon;
      row.lambda_sbs = p.lambda_sbs;
      row.p_max_dbm = p.p_max_dbm;
      row.source = Source::kAnalytic;
      row.p_success = value;
      row.ase = p.lambda_mbs * value * p.rate();
      table.rows.push_back(row);

      if (dual && config.closed_form != "false" && closed_form_applies(p)) {
        row.source = Source::kClosedForm;
        row.p_success = closed_form_da(p.beta_linear(), p.lambda_mbs, p.lambda_sbs);
        row.ase = p.lambda_mbs * row.p_success * p.rate();
        table.rows.push_back(row);
      }
    }
    if (log) *log << "analytic: " << to_string(config.axis) << " = " << v << " done\n";
  }
  return table;
}

ResultTable run_simulate(const RunConfig& config, std::ostream* log) {
  validate(config);
  ResultTable table;
  if (config.mode != Mode::kAnalytic) {
    const auto values = config.axis_values();
    if (log) {
      *log << "simulate: " << values.size() << " point(s) on axis " << to_string(config.axis)
           << ", " << config.n_realizations << " realizations each\n";
    }
    table = sweep(config.params, config.axis, values, config.schemes, config.n_realizations,
                  config.seed, sim_options(config));
  }
  if (config.mode != Mode::kSimulate) append(table, run_analytic(config, log));
  return table;
}

std::vector<RunConfig> figure_preset(std::string_view figure, const RunConfig& base) {
  std::vector<RunConfig> runs;
  auto make = [&](double beta_db, double p_max_dbm) {
    RunConfig c = base;
    c.params.beta_db = beta_db;
    c.params.p_max_dbm = p_max_dbm;
    return c;
  };
  if (figure == "fig2") {
    for (double beta : {0.0, 5.0}) {
      for (double p_max : {40.0, 60.0}) {
        RunConfig c = make(beta, p_max);
        c.params.lambda_sbs = 0.02;
        c.axis = SweepAxis::kEpsilon;
        c.values = {0.0, 0.25, 0.5, 0.75, 1.0};
        c.schemes = {Scheme::single(), Scheme::dual()};
        runs.push_back(c);
      }
    }
  } else if (figure == "fig3" || figure == "fig4") {
    RunConfig c = make(0.0, 50.0);
    c.axis = SweepAxis::kLambdaSbs;
    c.values = {0.02, 0.025, 0.03, 0.035, 0.04, 0.045, 0.05};
    c.schemes = {Scheme::single(), Scheme::dual()};
    runs.push_back(c);
  } else if (figure == "fig5") {
    for (double beta : {0.0, 5.0}) {
      RunConfig c = make(beta, 50.0);
      c.params.lambda_sbs = 0.02;
      c.axis = SweepAxis::kK;
      c.values = {0.0, 1.0, 2.0, 3.0, 4.0};
      runs.push_back(c);
    }
  } else {
    std::string valid;
    for (const auto& f : kFigurePresets) valid += (valid.empty() ? "" : ", ") + f;
    throw ConfigError("unknown figure preset '" + std::string(figure) + "' (valid: " + valid +
                      ")");
  }
  return runs;
}

ResultTable run_reproduce(std::string_view figure, const RunConfig& base, std::ostream* log) {
  ResultTable table;
  for (const RunConfig& run : figure_preset(figure, base)) append(table, run_simulate(run, log));
  return table;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uplink multi-association reliability in heterogeneous networks", "hetnet"};
  app.require_subcommand(1);

  struct Flags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<long long> trials;
    std::optional<double> window_side;
    std::optional<std::string> out;
    std::optional<std::string> mode;
    std::optional<unsigned> workers;
    std::vector<std::string> settings;
    std::string figure;
  } flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "key = value configuration file");
    sub->add_option("--seed", flags.seed, "master random seed");
    sub->add_option("--trials", flags.trials, "Monte Carlo realizations per point");
    sub->add_option("--window-side", flags.window_side, "side of the square window");
    sub->add_option("--out", flags.out, "output CSV path");
    sub->add_option("--mode", flags.mode, "simulate | analytic | both");
    sub->add_option("--workers", flags.workers, "worker threads (0 = all cores)");
    sub->add_option("--set", flags.settings, "override a config key: KEY=VALUE");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo sweep");
  CLI::App* analytic = app.add_subcommand("analytic", "numerical evaluation of the bounds");
  CLI::App* reproduce = app.add_subcommand("reproduce", "run a figure preset");
  add_common(simulate);
  add_common(analytic);
  add_common(reproduce);
  reproduce->add_option("figure", flags.figure, "fig2 | fig3 | fig4 | fig5")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    RunConfig config = flags.config_path.empty() ? RunConfig{} : load_config(flags.config_path);
    for (const std::string& s : flags.settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
      apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (flags.seed) config.seed = *flags.seed;
    if (flags.trials) config.n_realizations = *flags.trials;
    if (flags.window_side) config.window_side = *flags.window_side;
    if (flags.mode) config.mode = parse_mode(*flags.mode);
    if (flags.workers) config.workers = *flags.workers;

    ResultTable table;
    if (*simulate) {
      if (flags.out) config.out = *flags.out;
      table = run_simulate(config, &err);
    } else if (*analytic) {
      if (flags.out) config.out = *flags.out;
      config.mode = Mode::kAnalytic;
      table = run_simulate(config, &err);
    } else {
      if (!flags.mode) config.mode = Mode::kBoth;
      config.out = flags.out ? *flags.out : flags.figure + ".csv";
      table = run_reproduce(flags.figure, config, &err);
    }
    write_table(table, config.out);
    out << "wrote " << table.rows.size() << " rows to " << config.out << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << " (achieved error " << e.achieved_error() << ")\n";
    return kExitNumericError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace hetnet
