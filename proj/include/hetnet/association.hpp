#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/channel.hpp"
#include "hetnet/geometry.hpp"
#include "hetnet/params.hpp"

namespace hetnet {

/// Uplink association policy.
///  - single: the nearest node over MBS u SBS (max average received power)
///  - double: own Voronoi MBS plus the nearest SBS
///  - k_plus_one(k): own MBS plus the k nearest SBSs; k = 1 behaves as double
class Scheme {
 public:
  enum class Kind { kSingle, kDouble, kKPlusOne };

  static Scheme single() { return Scheme(Kind::kSingle, 0); }
  static Scheme dual() { return Scheme(Kind::kDouble, 1); }
  static Scheme k_plus_one(int k);

  /// Accepts "SA", "DA" and "KPLUS1_<k>" (case-insensitive).
  static Scheme parse(std::string_view name);

  Kind kind() const { return kind_; }
  /// Number of SBSs in the serving set (SA reports 0 but may serve one SBS).
  int sbs_count() const { return k_; }
  std::string name() const;

  friend bool operator==(const Scheme&, const Scheme&) = default;

 private:
  Scheme(Kind kind, int k) : kind_(kind), k_(k) {}

  Kind kind_;
  int k_;
};

struct AssociationOutcome {
  Scheme scheme = Scheme::single();
  std::vector<std::vector<Receiver>> serving_set;
  std::vector<std::vector<double>> link_sirs;
  std::vector<bool> success;

  Index user_count() const { return static_cast<Index>(success.size()); }
  Index success_count() const;
};

/// Per-user OR over serving links of (SIR >= beta).
std::vector<bool> success_indicators(const AssociationOutcome& outcome,
                                     double beta_linear);

/// Evaluates link SIRs on one realization, caching each (user, receiver)
/// value so that every scheme sees the same number for the same link.
class LinkEvaluator {
 public:
  /// `max_sbs` bounds the nearest-SBS lists kept per user.
  LinkEvaluator(const NetworkRealization& realization, const SystemParams& params,
                Index max_sbs);

  const NetworkRealization& realization() const { return *realization_; }
  const SystemParams& params() const { return *params_; }

  /// Nearest SBSs of `user`, ascending, at most max_sbs entries.
  const std::vector<Neighbor>& nearest_sbs(Index user) const { return nearest_sbs_[user]; }

  /// Single-association choice for `user` (nearest of own MBS and nearest SBS;
  /// a tie goes to the MBS).
  Receiver single_choice(Index user) const;
  double single_choice_distance(Index user) const;

  /// SIR of `user` at `rx` with FPC anchored to each user's own MBS.
  double link_sir(Index user, Receiver rx);

  /// SIR under SA with FPC anchored to each user's SA-selected node.
  double serving_anchored_sir(Index user, Receiver rx);

 private:
  struct CachedLink {
    Receiver rx;
    double sir;
  };

  const NetworkRealization* realization_;
  const SystemParams* params_;
  std::vector<std::vector<Neighbor>> nearest_sbs_;
  Eigen::VectorXd own_mbs_powers_;
  std::vector<std::vector<CachedLink>> cache_;
  std::optional<Eigen::VectorXd> serving_powers_;
};

AssociationOutcome associate(const Scheme& scheme, LinkEvaluator& links);

AssociationOutcome associate(const Scheme& scheme, const NetworkRealization& realization,
                             const SystemParams& params);

}  // namespace hetnet
