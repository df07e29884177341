#include "hetnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Table covers t in [1e-10, 1e12]; below it the kernel is linear in t to
// within t * p_hat relative, above it direct quadrature takes over.
constexpr double kLogTLo = -10.0 * std::numbers::ln10;
constexpr double kLogTHi = 12.0 * std::numbers::ln10;

const QuadratureOptions kTableOptions{1e-11, 1e-16, 2000};

struct KernelTerms {
  double value;
  double error;
  long evaluations;
};

// Kernel (or its t-derivative) with the own-cell distance written as
// z = pi*lambda*x^2, so that the distance law becomes exp(-z) dz.
KernelTerms kernel_terms(double t, const AnalyticParams& p, bool derivative,
                         const QuadratureOptions& opts) {
  const double p_hat = p.p_hat;
  auto closed = [&](double w) {
    return derivative ? w / ((1.0 + t * w) * (1.0 + t * w)) : t * w / (1.0 + t * w);
  };
  if (p.epsilon == 0.0) return {closed(1.0), 0.0, 0};

  const double z_cap = std::isinf(p.power_radius())
                           ? kInf
                           : kPi * p.lambda_mbs * p.power_radius() * p.power_radius();
  const double z_max = -std::log(p.truncation_quantile);
  const double upper = std::min(z_cap, z_max);
  const double exponent = 0.5 * p.alpha * p.epsilon;
  const double to_x2 = 1.0 / (kPi * p.lambda_mbs);

  auto integrand = [&](double z) {
    const double w = std::pow(z * to_x2, exponent);
    return closed(w) * std::exp(-z);
  };
  const QuadratureResult r = integrate(integrand, 0.0, upper, opts);
  double error = r.estimated_error;
  if (z_cap > z_max) {
    // uncovered mass between the cut and the cap radius
    error += std::exp(-z_max) * (derivative ? p_hat : 1.0);
  }
  const double atom = std::exp(-z_cap);
  return {r.value + atom * closed(p_hat), error, r.evaluations};
}

double first_moment(const AnalyticParams& p) {
  if (p.epsilon == 0.0) return 1.0;
  const double z_cap = std::isinf(p.power_radius())
                           ? kInf
                           : kPi * p.lambda_mbs * p.power_radius() * p.power_radius();
  const double upper = std::min(z_cap, -std::log(p.truncation_quantile));
  const double exponent = 0.5 * p.alpha * p.epsilon;
  const double to_x2 = 1.0 / (kPi * p.lambda_mbs);
  const QuadratureResult r = integrate(
      [&](double z) { return std::pow(z * to_x2, exponent) * std::exp(-z); }, 0.0, upper,
      kTableOptions);
  return r.value + std::exp(-z_cap) * p.p_hat;
}

double rayleigh_cutoff(double intensity, double quantile) {
  return std::sqrt(-std::log(quantile) / (kPi * intensity));
}

double rayleigh_density(double r, double intensity) {
  return 2.0 * kPi * intensity * r * std::exp(-kPi * intensity * r * r);
}

}  // namespace

AnalyticParams AnalyticParams::from(const SystemParams& params) {
  AnalyticParams out;
  out.lambda_mbs = params.lambda_mbs;
  out.lambda_sbs = params.lambda_sbs;
  out.alpha = params.alpha;
  out.epsilon = params.epsilon;
  out.p_hat = params.p_hat();
  out.beta_linear = params.beta_linear();
  return out;
}

void AnalyticParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
  };
  require(std::isfinite(lambda_mbs) && lambda_mbs > 0.0, "lambda_mbs must be positive");
  require(std::isfinite(lambda_sbs) && lambda_sbs >= 0.0, "lambda_sbs must be non-negative");
  require(std::isfinite(alpha) && alpha > 2.0, "alpha must exceed 2");
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
  require(std::isfinite(p_hat) && p_hat >= 1.0, "p_hat must be >= 1");
  require(std::isfinite(beta_linear) && beta_linear > 0.0, "beta must be positive");
  require(rel_tol > 0.0 && abs_tol > 0.0, "quadrature tolerances must be positive");
  require(truncation_quantile > 0.0 && truncation_quantile < 1.0,
          "truncation_quantile must lie in (0, 1)");
  require(kernel_points_per_decade >= 4, "kernel_points_per_decade must be >= 4");
}

double AnalyticParams::power_radius() const {
  if (epsilon == 0.0) return kInf;
  const double log_radius = std::log(p_hat) / (alpha * epsilon);
  return log_radius > 700.0 ? kInf : std::exp(log_radius);
}

double AnalyticParams::capped_probability() const {
  const double rho = power_radius();
  return std::isinf(rho) ? 0.0 : std::exp(-kPi * lambda_mbs * rho * rho);
}

QuadratureResult interferer_power_kernel_result(double t, const AnalyticParams& params) {
  params.validate();
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ParameterError("interferer_power_kernel: t must be positive and finite");
  }
  const KernelTerms k =
      kernel_terms(t, params, false, QuadratureOptions{params.rel_tol, params.abs_tol, 2000});
  return {k.value, k.error, k.evaluations};
}

double interferer_power_kernel(double t, const AnalyticParams& params) {
  return interferer_power_kernel_result(t, params).value;
}

KernelTable::KernelTable(const AnalyticParams& params) : params_(params) {
  params_.validate();
  if (params_.epsilon == 0.0) {
    exact_ = true;
    first_moment_ = 1.0;
    return;
  }
  first_moment_ = first_moment(params_);
  step_ = std::numbers::ln10 / params_.kernel_points_per_decade;
  log_t_lo_ = kLogTLo;
  const auto n = static_cast<std::size_t>(std::lround((kLogTHi - kLogTLo) / step_)) + 1;
  values_.resize(n);
  slopes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::exp(log_t_lo_ + step_ * static_cast<double>(i));
    values_[i] = kernel_terms(t, params_, false, kTableOptions).value;
    slopes_[i] = t * kernel_terms(t, params_, true, kTableOptions).value;
  }
  // Fritsch-Carlson limiter keeps each cubic piece monotone.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double secant = (values_[i + 1] - values_[i]) / step_;
    if (secant <= 0.0) {
      slopes_[i] = slopes_[i + 1] = 0.0;
      continue;
    }
    const double a = slopes_[i] / secant;
    const double b = slopes_[i + 1] / secant;
    const double norm = a * a + b * b;
    if (norm > 9.0) {
      const double tau = 3.0 / std::sqrt(norm);
      slopes_[i] = tau * a * secant;
      slopes_[i + 1] = tau * b * secant;
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double t = std::exp(log_t_lo_ + step_ * (static_cast<double>(i) + 0.5));
    const double direct = kernel_terms(t, params_, false, kTableOptions).value;
    rel_error_ = std::max(rel_error_, std::abs((*this)(t)-direct) / direct);
  }
}

double KernelTable::operator()(double t) const {
  if (!(t > 0.0)) return 0.0;
  if (std::isinf(t)) return 1.0;
  if (exact_) return t / (1.0 + t);
  const double s = std::log(t);
  if (s < log_t_lo_) return t * first_moment_;
  const double u = (s - log_t_lo_) / step_;
  const auto i = static_cast<std::size_t>(u);
  if (i + 1 >= values_.size()) return kernel_terms(t, params_, false, kTableOptions).value;

  const double h = u - static_cast<double>(i);
  const double h2 = h * h;
  const double h3 = h2 * h;
  return (2 * h3 - 3 * h2 + 1) * values_[i] + (h3 - 2 * h2 + h) * step_ * slopes_[i] +
         (-2 * h3 + 3 * h2) * values_[i + 1] + (h3 - h2) * step_ * slopes_[i + 1];
}

DoubleAssociationModel::DoubleAssociationModel(const AnalyticParams& params)
    : params_(params), kernel_(params) {}

QuadratureOptions DoubleAssociationModel::inner_options() const {
  return {params_.rel_tol * 1e-3, 1e-300, 2000};
}

// Integral of K(scale * x^-alpha) x dx over [lower, inf). The finite piece
// runs up to the knee where the kernel argument reaches 1; the tail uses
// x = knee * s^-gamma with gamma = 2/(alpha-2), which makes the transformed
// integrand vanish linearly at s = 0.
QuadratureResult DoubleAssociationModel::interference_integral(double scale, double lower,
                                                               bool from_zero) const {
  const double alpha = params_.alpha;
  const double knee = std::pow(scale, 1.0 / alpha);
  const double split = std::max(from_zero ? 0.0 : lower, knee);
  const QuadratureOptions opts = inner_options();

  QuadratureResult head;
  const double start = from_zero ? 0.0 : lower;
  if (split > start) {
    head = integrate([&](double x) { return kernel_(scale * std::pow(x, -alpha)) * x; },
                     start, split, opts);
  }

  const double gamma = 2.0 / (alpha - 2.0);
  const double at_split = scale * std::pow(split, -alpha);
  const double jacobian = gamma * split * split;
  const QuadratureResult tail = integrate(
      [&](double s) {
        return kernel_(at_split * std::pow(s, gamma * alpha)) * jacobian *
               std::pow(s, -2.0 * gamma - 1.0);
      },
      0.0, 1.0, opts);

  const double value = head.value + tail.value;
  const double error = head.estimated_error + tail.estimated_error +
                       kernel_.relative_interpolation_error() * value;
  return {value, error, head.evaluations + tail.evaluations};
}

QuadratureResult DoubleAssociationModel::laplace_mbs(PowerBranch branch, double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("laplace_mbs: r must be positive");
  const double a = params_.alpha;
  const double scale = branch == PowerBranch::kControlled
                           ? params_.beta_linear * std::pow(r, a * (1.0 - params_.epsilon))
                           : params_.beta_linear * std::pow(r, a) / params_.p_hat;
  const QuadratureResult integral = interference_integral(scale, r, false);
  const double rate = 2.0 * kPi * params_.lambda_mbs;
  const double value = std::exp(-rate * integral.value);
  return {value, value * rate * integral.estimated_error, integral.evaluations};
}

QuadratureResult DoubleAssociationModel::laplace_sbs(PowerBranch branch, double y,
                                                     double r) const {
  if (!(y > 0.0) || !std::isfinite(y)) throw ParameterError("laplace_sbs: y must be positive");
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("laplace_sbs: r must be positive");
  const double a = params_.alpha;
  const double scale =
      branch == PowerBranch::kControlled
          ? params_.beta_linear * std::pow(y, a) * std::pow(r, -a * params_.epsilon)
          : params_.beta_linear * std::pow(y, a) / params_.p_hat;
  const QuadratureResult integral = interference_integral(scale, 0.0, true);
  const double rate = 2.0 * kPi * params_.lambda_mbs;
  const double value = std::exp(-rate * integral.value);
  return {value, value * rate * integral.estimated_error, integral.evaluations};
}

QuadratureResult DoubleAssociationModel::mbs_success() const {
  const double lambda = params_.lambda_mbs;
  const double r_max = rayleigh_cutoff(lambda, params_.truncation_quantile);
  const double rho = params_.power_radius();
  const QuadratureOptions outer{params_.rel_tol, params_.abs_tol, 2000};

  double inner_error = 0.0;
  long evaluations = 0;
  auto weighted = [&](PowerBranch branch) {
    return [&, branch](double r) {
      const QuadratureResult l = laplace_mbs(branch, r);
      inner_error = std::max(inner_error, l.estimated_error);
      evaluations += l.evaluations;
      return l.value * rayleigh_density(r, lambda);
    };
  };

  QuadratureResult total = integrate(weighted(PowerBranch::kControlled), 0.0,
                                     std::min(rho, r_max), outer);
  if (rho < r_max) {
    const QuadratureResult capped = integrate(weighted(PowerBranch::kCapped), rho, r_max, outer);
    total.value += capped.value;
    total.estimated_error += capped.estimated_error;
    total.evaluations += capped.evaluations;
  }
  total.estimated_error += inner_error + params_.truncation_quantile;
  total.evaluations += evaluations;
  return total;
}

QuadratureResult DoubleAssociationModel::sbs_success() const {
  if (params_.lambda_sbs == 0.0) return {};
  const double lambda = params_.lambda_mbs;
  const double q = params_.truncation_quantile;
  const double y_max = rayleigh_cutoff(params_.lambda_sbs, q);
  const double r_max = rayleigh_cutoff(lambda, q);
  const double rho = params_.power_radius();
  const double capped_mass = params_.capped_probability();
  const QuadratureOptions outer{params_.rel_tol, params_.abs_tol, 2000};
  const QuadratureOptions middle{params_.rel_tol * 1e-2, params_.abs_tol * 1e-2, 2000};

  double inner_error = 0.0;
  long evaluations = 0;
  auto conditional = [&](double y) {
    if (params_.epsilon == 0.0) {
      // no power control: the anchor distance drops out
      const QuadratureResult l = laplace_sbs(PowerBranch::kControlled, y, 1.0);
      inner_error = std::max(inner_error, l.estimated_error);
      evaluations += l.evaluations;
      return l.value;
    }
    double local_error = rho > r_max ? q : 0.0;
    const QuadratureResult controlled = integrate(
        [&](double r) {
          const QuadratureResult l = laplace_sbs(PowerBranch::kControlled, y, r);
          local_error = std::max(local_error, l.estimated_error);
          evaluations += l.evaluations;
          return l.value * rayleigh_density(r, lambda);
        },
        0.0, std::min(rho, r_max), middle);
    double value = controlled.value;
    local_error += controlled.estimated_error;
    if (capped_mass > 0.0) {
      const QuadratureResult l = laplace_sbs(PowerBranch::kCapped, y, 1.0);
      value += l.value * capped_mass;
      local_error += l.estimated_error * capped_mass;
      evaluations += l.evaluations;
    }
    inner_error = std::max(inner_error, local_error);
    evaluations += controlled.evaluations;
    return value;
  };

  QuadratureResult total = integrate(
      [&](double y) { return conditional(y) * rayleigh_density(y, params_.lambda_sbs); }, 0.0,
      y_max, outer);
  total.estimated_error += inner_error + q;
  total.evaluations += evaluations;
  return total;
}

QuadratureResult DoubleAssociationModel::da_success() const {
  const QuadratureResult m = mbs_success();
  const QuadratureResult s = sbs_success();
  const double value = 1.0 - (1.0 - m.value) * (1.0 - s.value);
  const double error = (1.0 - s.value) * m.estimated_error + (1.0 - m.value) * s.estimated_error;
  return {value, error, m.evaluations + s.evaluations};
}

double laplace_I_M(PowerBranch branch, double r, const AnalyticParams& params) {
  return DoubleAssociationModel(params).laplace_mbs(branch, r).value;
}

double laplace_I_S(PowerBranch branch, double y, double r, const AnalyticParams& params) {
  return DoubleAssociationModel(params).laplace_sbs(branch, y, r).value;
}

double prob_mbs_success(const AnalyticParams& params) {
  return DoubleAssociationModel(params).mbs_success().value;
}

double prob_sbs_success(const AnalyticParams& params) {
  return DoubleAssociationModel(params).sbs_success().value;
}

double prob_da_success(const AnalyticParams& params) {
  return DoubleAssociationModel(params).da_success().value;
}

double closed_form_mbs(double beta_linear) {
  const double sb = std::sqrt(beta_linear);
  return 1.0 / (1.0 + sb * std::atan(sb));
}

double closed_form_sbs(double beta_linear, double lambda_mbs, double lambda_sbs) {
  return 2.0 * lambda_sbs / (kPi * std::sqrt(beta_linear) * lambda_mbs + 2.0 * lambda_sbs);
}

double closed_form_da(double beta_linear, double lambda_mbs, double lambda_sbs) {
  if (!(beta_linear > 0.0) || !(lambda_mbs > 0.0) || !(lambda_sbs >= 0.0)) {
    throw ParameterError("closed_form_da: beta and lambda must be positive");
  }
  return 1.0 - (1.0 - closed_form_mbs(beta_linear)) *
                   (1.0 - closed_form_sbs(beta_linear, lambda_mbs, lambda_sbs));
}

}  // namespace hetnet
