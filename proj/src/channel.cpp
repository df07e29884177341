#include "hetnet/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hetnet/errors.hpp"

namespace hetnet {

void SystemParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
  };
  require(std::isfinite(lambda_mbs) && lambda_mbs > 0.0, "lambda_mbs must be positive");
  require(std::isfinite(lambda_sbs) && lambda_sbs >= 0.0,
          "lambda_sbs must be non-negative");
  require(std::isfinite(alpha) && alpha > 2.0, "alpha must exceed 2");
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
  require(std::isfinite(p_default_dbm), "p_default_dbm must be finite");
  require(std::isfinite(p_max_dbm) && p_max_dbm >= p_default_dbm,
          "p_max_dbm must be finite and >= p_default_dbm");
  require(std::isfinite(beta_db), "beta_db must be finite");
}

double transmit_power(double r_to_mbs, const SystemParams& params) {
  if (!(r_to_mbs >= 0.0)) {
    throw ParameterError("transmit_power: negative distance " + std::to_string(r_to_mbs));
  }
  const double p = params.p_default_mw();
  if (params.epsilon == 0.0) return p;
  return std::min(std::pow(r_to_mbs, params.alpha * params.epsilon) * p,
                  params.p_max_mw());
}

double relative_transmit_power(double r_to_mbs, const SystemParams& params) {
  if (!(r_to_mbs >= 0.0)) {
    throw ParameterError("transmit_power: negative distance " + std::to_string(r_to_mbs));
  }
  if (params.epsilon == 0.0) return 1.0;
  return std::min(std::pow(r_to_mbs, params.alpha * params.epsilon), params.p_hat());
}

double received_power(double gain, double link_distance, double tx_power,
                      double alpha) {
  if (link_distance == 0.0) {
    throw SingularityError("received_power: zero link distance");
  }
  if (!(gain > 0.0) || !(link_distance > 0.0) || !(tx_power > 0.0)) {
    throw ParameterError("received_power: inputs must be positive");
  }
  return gain * std::pow(link_distance, -alpha) * tx_power;
}

Eigen::VectorXd transmit_powers(const NetworkRealization& realization,
                                const SystemParams& params) {
  const Index n = realization.user_count();
  Eigen::VectorXd out(n);
  for (Index i = 0; i < n; ++i) {
    out[i] = transmit_power(realization.users.dist_to_mbs[i], params);
  }
  return out;
}

Eigen::VectorXd relative_transmit_powers(const NetworkRealization& realization,
                                         const SystemParams& params) {
  const Index n = realization.user_count();
  Eigen::VectorXd out(n);
  for (Index i = 0; i < n; ++i) {
    out[i] = relative_transmit_power(realization.users.dist_to_mbs[i], params);
  }
  return out;
}

double sir_at(Receiver rx, Index serving_user, const NetworkRealization& realization,
              std::span<const double> tx_powers, double alpha) {
  const Index n = realization.user_count();
  if (serving_user < 0 || serving_user >= n) {
    throw ParameterError("sir_at: serving user index out of range");
  }
  if (static_cast<Index>(tx_powers.size()) != n) {
    throw ParameterError("sir_at: one transmit power per user required");
  }
  const Eigen::Vector2d at = realization.position(rx);
  const double side = realization.window().side();
  const double half_alpha = 0.5 * alpha;
  const bool fourth_power = alpha == 4.0;

  auto rx_power = [&](Index j) {
    const double d2 = toroidal_distance_sq(at, realization.users.coords.col(j), side);
    if (d2 == 0.0) throw SingularityError("sir_at: user coincides with receiver");
    const double path_gain = fourth_power ? 1.0 / (d2 * d2) : std::pow(d2, -half_alpha);
    return realization.fading.gain(j, rx) * path_gain * tx_powers[j];
  };

  const double signal = rx_power(serving_user);
  double interference = 0.0;
  for (Index j = 0; j < n; ++j) {
    if (j != serving_user) interference += rx_power(j);
  }
  if (interference == 0.0) return std::numeric_limits<double>::infinity();
  return signal / interference;
}

double sir_at(Receiver rx, Index serving_user, const NetworkRealization& realization,
              const SystemParams& params) {
  const Eigen::VectorXd p = relative_transmit_powers(realization, params);
  return sir_at(rx, serving_user, realization, std::span<const double>(p.data(), p.size()),
                params.alpha);
}

}  // namespace hetnet
