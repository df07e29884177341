#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hetnet/association.hpp"
#include "hetnet/channel.hpp"
#include "hetnet/geometry.hpp"
#include "hetnet/params.hpp"
#include "hetnet/random.hpp"
#include "hetnet/result_table.hpp"

namespace hetnet {

struct SimulationOptions {
  double window_side = 100.0;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// Monte Carlo estimate. The CI is a 95% normal interval over
/// per-realization batch means; realizations are the i.i.d. unit.
struct EstimateWithCI {
  double value = 0.0;
  double ci_half_width = 0.0;
  Index n_realizations = 0;
  Index n_user_samples = 0;
  /// Realizations redrawn because they had no MBS (or too few SBSs).
  Index resamples = 0;
};

struct SchemeTally {
  Index users = 0;
  Index successes = 0;
  double success_fraction = 0.0;
  /// Successful-user density times log2(1 + beta).
  double ase_contribution = 0.0;
};

struct RealizationResult {
  std::vector<SchemeTally> schemes;
  Index resamples = 0;
};

/// Draws MBS and SBS processes, users and a fading seed. Redraws (and counts
/// in `resamples`) while the MBS set is empty or there are fewer than
/// `min_sbs` SBSs.
NetworkRealization sample_realization(const SystemParams& params, const Window& window,
                                      Index min_sbs, Rng& rng, Index& resamples);

/// Evaluates all `schemes` on one shared realization (common random numbers).
RealizationResult run_realization(const SystemParams& params,
                                  std::span<const Scheme> schemes, const Window& window,
                                  Rng& rng);

/// Seed of realization `index` under master `seed`.
std::uint64_t realization_seed(std::uint64_t seed, Index index);

struct SchemeEstimate {
  Scheme scheme;
  EstimateWithCI success;
  EstimateWithCI ase;
};

/// Runs `n_realizations` realizations and estimates every scheme on them.
/// The result depends only on (params, schemes, n, seed, window side),
/// never on the worker count.
std::vector<SchemeEstimate> simulate_point(const SystemParams& params,
                                           std::span<const Scheme> schemes,
                                           Index n_realizations, std::uint64_t seed,
                                           const SimulationOptions& options = {});

EstimateWithCI estimate(const SystemParams& params, const Scheme& scheme,
                        Index n_realizations, std::uint64_t seed,
                        const SimulationOptions& options = {});

/// lambda * p_success * log2(1 + beta), CI scaled alike.
EstimateWithCI estimate_ase(const SystemParams& params, const Scheme& scheme,
                            Index n_realizations, std::uint64_t seed,
                            const SimulationOptions& options = {});

enum class SweepAxis { kEpsilon, kLambdaSbs, kK, kBeta };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_axis(std::string_view text);

/// Applies `value` along `axis` to `base`; throws ParameterError when the value
/// is invalid for the axis. The k axis leaves params untouched.
SystemParams apply_axis(const SystemParams& base, SweepAxis axis, double value);

/// Seed of one sweep point, a stable hash of (seed, axis, value). Points on the
/// k axis share one seed so every association count sees the same draws.
std::uint64_t point_seed(std::uint64_t seed, SweepAxis axis, double value);

/// One simulated row per (scheme, value). On the k axis the scheme of each row
/// is KPLUS1_<value> and `schemes` is ignored.
ResultTable sweep(const SystemParams& base, SweepAxis axis, std::span<const double> values,
                  std::span<const Scheme> schemes, Index n_realizations, std::uint64_t seed,
                  const SimulationOptions& options = {});

}  // namespace hetnet
