#include "hetnet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <thread>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

constexpr double kZ95 = 1.96;

Index max_sbs_needed(std::span<const Scheme> schemes) {
  Index k = 0;
  for (const Scheme& s : schemes) k = std::max<Index>(k, s.sbs_count());
  return k;
}

bool needs_sbs_neighbours(std::span<const Scheme> schemes) {
  return std::any_of(schemes.begin(), schemes.end(), [](const Scheme& s) {
    return s.kind() == Scheme::Kind::kSingle || s.sbs_count() > 0;
  });
}

EstimateWithCI batch_mean(const std::vector<double>& samples) {
  const auto n = static_cast<Index>(samples.size());
  EstimateWithCI out;
  out.n_realizations = n;
  if (n == 0) return out;
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  out.value = mean;
  if (n > 1) {
    const double var = ss / static_cast<double>(n - 1);
    out.ci_half_width = kZ95 * std::sqrt(var / static_cast<double>(n));
  }
  return out;
}

std::string format_value(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

NetworkRealization sample_realization(const SystemParams& params, const Window& window,
                                      Index min_sbs, Rng& rng, Index& resamples) {
  if (min_sbs > 0 && params.lambda_sbs == 0.0) {
    throw ParameterError("schemes with SBS links need lambda_sbs > 0");
  }
  for (;;) {
    PointSet mbs = sample_ppp(params.lambda_mbs, window, rng);
    PointSet sbs = params.lambda_sbs > 0.0
                       ? sample_ppp(params.lambda_sbs, window, rng)
                       : PointSet{Eigen::Matrix2Xd(2, 0), 0.0, window};
    if (mbs.empty() || sbs.size() < min_sbs) {
      ++resamples;
      continue;
    }
    UserPlacement users = place_users(mbs, window, rng);
    const FadingField fading(rng());
    return NetworkRealization{std::move(mbs), std::move(sbs), std::move(users), fading};
  }
}

RealizationResult run_realization(const SystemParams& params,
                                  std::span<const Scheme> schemes, const Window& window,
                                  Rng& rng) {
  RealizationResult out;
  const Index k_max = max_sbs_needed(schemes);
  const NetworkRealization net = sample_realization(params, window, k_max, rng, out.resamples);

  const Index keep = needs_sbs_neighbours(schemes) ? std::max<Index>(k_max, 1) : 0;
  LinkEvaluator links(net, params, keep);
  const double rate = params.rate();
  for (const Scheme& scheme : schemes) {
    const AssociationOutcome outcome = associate(scheme, links);
    SchemeTally t;
    t.users = outcome.user_count();
    t.successes = outcome.success_count();
    t.success_fraction =
        t.users > 0 ? static_cast<double>(t.successes) / static_cast<double>(t.users) : 0.0;
    t.ase_contribution = static_cast<double>(t.successes) / window.area() * rate;
    out.schemes.push_back(t);
  }
  return out;
}

std::uint64_t realization_seed(std::uint64_t seed, Index index) {
  return hash_combine(seed, static_cast<std::uint64_t>(index));
}

std::vector<SchemeEstimate> simulate_point(const SystemParams& params,
                                           std::span<const Scheme> schemes,
                                           Index n_realizations, std::uint64_t seed,
                                           const SimulationOptions& options) {
  params.validate();
  if (n_realizations < 2) throw ParameterError("n_realizations must be at least 2");
  if (schemes.empty()) throw ParameterError("at least one scheme is required");
  const Window window(options.window_side);

  std::vector<RealizationResult> results(static_cast<std::size_t>(n_realizations));
  auto work = [&](Index begin, Index stride) {
    for (Index i = begin; i < n_realizations; i += stride) {
      Rng rng(realization_seed(seed, i));
      results[i] = run_realization(params, schemes, window, rng);
    }
  };

  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(n_realizations));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            work(w, workers);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Index resamples = 0;
  for (const auto& r : results) resamples += r.resamples;

  std::vector<SchemeEstimate> out;
  const double ase_scale = params.lambda_mbs * params.rate();
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    std::vector<double> fractions;
    fractions.reserve(results.size());
    Index users = 0;
    for (const auto& r : results) {
      fractions.push_back(r.schemes[s].success_fraction);
      users += r.schemes[s].users;
    }
    EstimateWithCI p = batch_mean(fractions);
    p.n_user_samples = users;
    p.resamples = resamples;
    EstimateWithCI ase = p;
    ase.value = ase_scale * p.value;
    ase.ci_half_width = ase_scale * p.ci_half_width;
    out.push_back({schemes[s], p, ase});
  }
  return out;
}

EstimateWithCI estimate(const SystemParams& params, const Scheme& scheme,
                        Index n_realizations, std::uint64_t seed,
                        const SimulationOptions& options) {
  return simulate_point(params, std::span<const Scheme>(&scheme, 1), n_realizations, seed,
                        options)
      .front()
      .success;
}

EstimateWithCI estimate_ase(const SystemParams& params, const Scheme& scheme,
                            Index n_realizations, std::uint64_t seed,
                            const SimulationOptions& options) {
  return simulate_point(params, std::span<const Scheme>(&scheme, 1), n_realizations, seed,
                        options)
      .front()
      .ase;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kEpsilon:
      return "epsilon";
    case SweepAxis::kLambdaSbs:
      return "lambda_sbs";
    case SweepAxis::kK:
      return "k";
    case SweepAxis::kBeta:
      return "beta";
  }
  return {};
}

SweepAxis parse_axis(std::string_view text) {
  for (SweepAxis a : {SweepAxis::kEpsilon, SweepAxis::kLambdaSbs, SweepAxis::kK,
                      SweepAxis::kBeta}) {
    if (text == to_string(a)) return a;
  }
  throw ParameterError("unknown sweep axis '" + std::string(text) +
                       "' (expected epsilon, lambda_sbs, k or beta)");
}

SystemParams apply_axis(const SystemParams& base, SweepAxis axis, double value) {
  SystemParams p = base;
  switch (axis) {
    case SweepAxis::kEpsilon:
      if (!(value >= 0.0 && value <= 1.0)) throw ParameterError("epsilon must lie in [0, 1]");
      p.epsilon = value;
      break;
    case SweepAxis::kLambdaSbs:
      if (!(value >= 0.0) || !std::isfinite(value)) {
        throw ParameterError("lambda_sbs must be non-negative");
      }
      p.lambda_sbs = value;
      break;
    case SweepAxis::kK:
      if (!(value >= 0.0) || value != std::floor(value) || value > 1e6) {
        throw ParameterError("k must be a non-negative integer");
      }
      break;
    case SweepAxis::kBeta:
      if (!std::isfinite(value)) throw ParameterError("beta (dB) must be finite");
      p.beta_db = value;
      break;
  }
  return p;
}

std::uint64_t point_seed(std::uint64_t seed, SweepAxis axis, double value) {
  const std::uint64_t h = hash_combine(seed, hash_string(to_string(axis)));
  return axis == SweepAxis::kK ? h : hash_combine(h, hash_double(value));
}

ResultTable sweep(const SystemParams& base, SweepAxis axis, std::span<const double> values,
                  std::span<const Scheme> schemes, Index n_realizations, std::uint64_t seed,
                  const SimulationOptions& options) {
  if (values.empty()) throw ParameterError("sweep: no axis values");
  std::vector<SystemParams> point_params;
  for (std::size_t i = 0; i < values.size(); ++i) {
    try {
      point_params.push_back(apply_axis(base, axis, values[i]));
      if (axis == SweepAxis::kLambdaSbs && values[i] == 0.0) {
        for (const Scheme& s : schemes) {
          if (s.kind() != Scheme::Kind::kSingle) {
            throw ParameterError("scheme " + s.name() + " needs lambda_sbs > 0");
          }
        }
      }
    } catch (const ParameterError& e) {
      throw ParameterError("sweep: values[" + std::to_string(i) + "] = " +
                           format_value(values[i]) + " invalid for axis " +
                           std::string(to_string(axis)) + ": " + e.what());
    }
  }

  ResultTable table;
  auto emit = [&](const SchemeEstimate& est, const SystemParams& p, double value,
                  std::uint64_t s) {
    CurvePoint row;
    row.scheme = est.scheme.name();
    row.axis_name = std::string(to_string(axis));
    row.axis_value = value;
    row.beta_db = p.beta_db;
    row.epsilon = p.epsilon;
    row.lambda_sbs = p.lambda_sbs;
    row.p_max_dbm = p.p_max_dbm;
    row.source = Source::kSim;
    row.p_success = est.success.value;
    row.ci_half_width = est.success.ci_half_width;
    row.ase = est.ase.value;
    row.n_realizations = est.success.n_realizations;
    row.seed = s;
    table.rows.push_back(std::move(row));
  };

  if (axis == SweepAxis::kK) {
    std::vector<Scheme> by_k;
    for (double v : values) by_k.push_back(Scheme::k_plus_one(static_cast<int>(v)));
    const std::uint64_t s = point_seed(seed, axis, 0.0);
    const auto est = simulate_point(base, by_k, n_realizations, s, options);
    for (std::size_t i = 0; i < values.size(); ++i) emit(est[i], base, values[i], s);
    return table;
  }

  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t s = point_seed(seed, axis, values[i]);
    for (const auto& est : simulate_point(point_params[i], schemes, n_realizations, s, options)) {
      emit(est, point_params[i], values[i], s);
    }
  }
  return table;
}

}  // namespace hetnet
