#pragma once

#include <cmath>

namespace hetnet {

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Which distance fractional power control compensates.
enum class FpcAnchor {
  kOwnMbs,       // distance to the user's Voronoi MBS, for every scheme
  kServingNode,  // under SA, distance to the selected node instead
};

/// Model constants. Powers and thresholds are given in dBm / dB and
/// converted to linear units on access.
struct SystemParams {
  double lambda_mbs = 0.01;
  double lambda_sbs = 0.02;
  double alpha = 4.0;
  double epsilon = 0.5;
  double p_default_dbm = 30.0;
  double p_max_dbm = 50.0;
  double beta_db = 0.0;
  FpcAnchor fpc_anchor = FpcAnchor::kOwnMbs;

  /// Throws ParameterError naming the first violated constraint.
  void validate() const;

  double p_default_mw() const { return dbm_to_mw(p_default_dbm); }
  double p_max_mw() const { return dbm_to_mw(p_max_dbm); }
  /// Cap relative to the default power, >= 1.
  double p_hat() const { return dbm_to_mw(p_max_dbm - p_default_dbm); }
  double beta_linear() const { return db_to_linear(beta_db); }
  /// Shannon rate at the threshold, bits/s/Hz.
  double rate() const { return std::log2(1.0 + beta_linear()); }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

}  // namespace hetnet
