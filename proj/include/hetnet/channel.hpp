#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>

#include "hetnet/geometry.hpp"
#include "hetnet/params.hpp"
#include "hetnet/random.hpp"

namespace hetnet {

enum class Tier : std::uint8_t { kMbs, kSbs };

/// A base station acting as an uplink receiver.
struct Receiver {
  Tier tier;
  Index index;

  friend bool operator==(const Receiver&, const Receiver&) = default;
};

/// Unit-mean exponential (Rayleigh power) gains, one per (user, receiver)
/// pair in a slot. Gains are a pure function of (seed, user, receiver), so a
/// pair that is never looked at costs nothing and every scheme evaluated on
/// the same realization sees the same value.
class FadingField {
 public:
  explicit FadingField(std::uint64_t seed = 0) : seed_(seed) {}

  double gain(Index user, Receiver rx) const {
    const std::uint64_t key = pair_key(user, rx);
    if (overrides_) {
      if (auto it = overrides_->find(key); it != overrides_->end()) return it->second;
    }
    return -std::log(to_open_unit(hash_combine(seed_, key)));
  }

  /// Copy of this field with the (user, rx) gain pinned to `value`.
  FadingField with_gain(Index user, Receiver rx, double value) const {
    FadingField out = *this;
    auto pinned = overrides_ ? std::make_shared<std::unordered_map<std::uint64_t, double>>(*overrides_)
                             : std::make_shared<std::unordered_map<std::uint64_t, double>>();
    (*pinned)[pair_key(user, rx)] = value;
    out.overrides_ = std::move(pinned);
    return out;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t pair_key(Index user, Receiver rx) {
    const std::uint64_t receiver =
        (static_cast<std::uint64_t>(rx.index) << 1) | (rx.tier == Tier::kSbs ? 1U : 0U);
    return hash_combine(static_cast<std::uint64_t>(user), receiver);
  }

  std::uint64_t seed_;
  std::shared_ptr<const std::unordered_map<std::uint64_t, double>> overrides_;
};

/// One sampled deployment.
struct NetworkRealization {
  PointSet mbs;
  PointSet sbs;
  UserPlacement users;
  FadingField fading;

  const Window& window() const { return mbs.window; }
  Index user_count() const { return users.size(); }

  Eigen::Vector2d position(Receiver rx) const {
    return rx.tier == Tier::kMbs ? Eigen::Vector2d(mbs.point(rx.index))
                                 : Eigen::Vector2d(sbs.point(rx.index));
  }
};

/// min(r^(alpha*eps) * P, Pmax), in mW.
double transmit_power(double r_to_mbs, const SystemParams& params);

/// transmit_power / P, i.e. min(r^(alpha*eps), p_hat). SIRs are computed from
/// these so that P cancels exactly.
double relative_transmit_power(double r_to_mbs, const SystemParams& params);

/// gain * d^-alpha * tx, in the units of tx.
double received_power(double gain, double link_distance, double tx_power,
                      double alpha);

/// Transmit power of every user with FPC anchored to its own MBS.
Eigen::VectorXd transmit_powers(const NetworkRealization& realization,
                                const SystemParams& params);
Eigen::VectorXd relative_transmit_powers(const NetworkRealization& realization,
                                         const SystemParams& params);

/// SIR at `rx` for `serving_user`, every other user interfering, noise
/// ignored. +infinity when there are no interferers.
double sir_at(Receiver rx, Index serving_user, const NetworkRealization& realization,
              const SystemParams& params);

/// As above with caller-supplied transmit powers (one per user, any common unit).
double sir_at(Receiver rx, Index serving_user, const NetworkRealization& realization,
              std::span<const double> tx_powers, double alpha);

}  // namespace hetnet
