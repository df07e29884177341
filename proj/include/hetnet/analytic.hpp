#pragma once

#include <vector>

#include "hetnet/params.hpp"
#include "hetnet/quadrature.hpp"

namespace hetnet {

/// Inputs of the double-association success-probability expressions, with
/// the users of other cells approximated by a PPP of the MBS intensity and
/// their transmit powers treated as independent.
struct AnalyticParams {
  double lambda_mbs = 0.01;
  double lambda_sbs = 0.02;
  double alpha = 4.0;
  double epsilon = 0.0;
  /// Power cap over default power, >= 1.
  double p_hat = 100.0;
  double beta_linear = 1.0;

  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  /// Rayleigh-type outer weights are cut where they fall below this
  /// fraction of their mass.
  double truncation_quantile = 1e-12;
  /// Density of the log-spaced interferer-kernel table.
  int kernel_points_per_decade = 32;

  static AnalyticParams from(const SystemParams& params);

  void validate() const;

  /// Distance beyond which the power cap binds: p_hat^(1/(alpha*eps)).
  /// +infinity when epsilon = 0 (or when the radius overflows).
  double power_radius() const;

  /// Probability that an own-cell distance exceeds power_radius(), i.e. that
  /// an interferer transmits at the cap.
  double capped_probability() const;
};

/// Which side of the power-cap radius the serving user is on.
enum class PowerBranch {
  kControlled,  // r below the radius: power r^(alpha*eps) * P
  kCapped,      // r at or beyond the radius: power Pmax
};

/// E_x[ t*w(x) / (1 + t*w(x)) ] where w(x) = min(x^(alpha*eps), p_hat) is an
/// interferer's transmit power relative to the default and x its own-cell
/// distance with density 2*pi*lambda*x*exp(-pi*lambda*x^2). Evaluated by
/// direct quadrature. Equals t/(1+t) when epsilon = 0.
QuadratureResult interferer_power_kernel_result(double t, const AnalyticParams& params);
double interferer_power_kernel(double t, const AnalyticParams& params);

/// Log-spaced table of the kernel with exact slopes and monotone cubic
/// Hermite interpolation. Exact formula when epsilon = 0.
class KernelTable {
 public:
  explicit KernelTable(const AnalyticParams& params);

  double operator()(double t) const;

  /// Largest midpoint deviation from direct quadrature seen while building,
  /// relative to the kernel value there.
  double relative_interpolation_error() const { return rel_error_; }

 private:
  AnalyticParams params_;
  bool exact_ = false;
  double log_t_lo_ = 0.0;
  double step_ = 0.0;
  double first_moment_ = 0.0;
  std::vector<double> values_;
  std::vector<double> slopes_;  // dK / d(ln t)
  double rel_error_ = 0.0;
};

/// Success probabilities at the typical MBS and SBS under double association,
/// sharing one kernel table.
class DoubleAssociationModel {
 public:
  explicit DoubleAssociationModel(const AnalyticParams& params);

  const AnalyticParams& params() const { return params_; }
  const KernelTable& kernel() const { return kernel_; }

  /// Laplace functional of the interference at the typical MBS when its user
  /// is at distance r. Interferers lie beyond r.
  QuadratureResult laplace_mbs(PowerBranch branch, double r) const;

  /// Laplace functional of the interference at the typical SBS, serving
  /// distance y, user-to-MBS distance r (the power-control anchor).
  /// Interferers may lie arbitrarily close.
  QuadratureResult laplace_sbs(PowerBranch branch, double y, double r) const;

  /// Lower bound on P[SIR at MBS >= beta].
  QuadratureResult mbs_success() const;
  /// P[SIR at nearest SBS >= beta].
  QuadratureResult sbs_success() const;
  /// 1 - (1 - p_mbs)(1 - p_sbs).
  QuadratureResult da_success() const;

 private:
  QuadratureResult interference_integral(double scale, double lower, bool from_zero) const;
  QuadratureOptions inner_options() const;

  AnalyticParams params_;
  KernelTable kernel_;
};

double laplace_I_M(PowerBranch branch, double r, const AnalyticParams& params);
double laplace_I_S(PowerBranch branch, double y, double r, const AnalyticParams& params);
double prob_mbs_success(const AnalyticParams& params);
double prob_sbs_success(const AnalyticParams& params);
double prob_da_success(const AnalyticParams& params);

/// Closed-form lower bound on DA success for alpha = 4, epsilon = 0:
/// 1 - (1 - 1/(1 + sqrt(b) atan(sqrt(b)))) (1 - 2 ls / (pi sqrt(b) l + 2 ls)).
double closed_form_da(double beta_linear, double lambda_mbs, double lambda_sbs);

/// The two factors of closed_form_da: MBS and SBS success probabilities.
double closed_form_mbs(double beta_linear);
double closed_form_sbs(double beta_linear, double lambda_mbs, double lambda_sbs);

}  // namespace hetnet
