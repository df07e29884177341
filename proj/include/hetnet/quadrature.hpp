#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "hetnet/errors.hpp"

namespace hetnet {

struct QuadratureOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  int max_intervals = 1000;
};

struct QuadratureResult {
  double value = 0.0;
  double estimated_error = 0.0;
  long evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment gauss_kronrod15(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> fx{};

  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    fx[2 * j] = f1;
    fx[2 * j + 1] = f2;
    kronrod += kKronrodWeights[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  fx[14] = fc;

  const double mean = 0.5 * kronrod;
  double abs_sum = kKronrodWeights[7] * std::abs(fc - mean);
  double abs_f = kKronrodWeights[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    abs_sum += kKronrodWeights[j] * (std::abs(fx[2 * j] - mean) + std::abs(fx[2 * j + 1] - mean));
    abs_f += kKronrodWeights[j] * (std::abs(fx[2 * j]) + std::abs(fx[2 * j + 1]));
  }
  abs_sum *= std::abs(half);
  abs_f *= std::abs(half);

  double err = std::abs((kronrod - gauss) * half);
  if (abs_sum != 0.0 && err != 0.0) {
    err = abs_sum * std::min(1.0, std::pow(200.0 * err / abs_sum, 1.5));
  }
  if (abs_f > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * abs_f, err);
  }
  return {a, b, kronrod * half, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b]: the segment
/// with the largest error estimate is bisected until the total estimate meets
/// max(abs_tol, rel_tol * |value|). Throws NumericError when the interval
/// budget runs out or a segment can no longer be split.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  QuadratureResult out;
  if (a == b) return out;
  auto counted = [&](double x) {
    ++out.evaluations;
    return f(x);
  };

  std::priority_queue<detail::Segment> heap;
  detail::Segment first = detail::gauss_kronrod15(counted, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);

  auto done = [&] { return error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  while (!done()) {
    if (static_cast<int>(heap.size()) >= opts.max_intervals) {
      throw NumericError("integrate: interval budget exhausted on [" + std::to_string(a) +
                             ", " + std::to_string(b) + "]",
                         error);
    }
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      throw NumericError("integrate: segment cannot be subdivided further", error);
    }
    heap.pop();
    const detail::Segment left = detail::gauss_kronrod15(counted, worst.a, mid);
    const detail::Segment right = detail::gauss_kronrod15(counted, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.estimated_error = error;
  return out;
}

}  // namespace hetnet
