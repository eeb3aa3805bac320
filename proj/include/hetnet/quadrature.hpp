#pragma once

// One-dimensional adaptive quadrature.
//
// Finite intervals use a globally adaptive 21-point Gauss-Kronrod rule with
// the QUADPACK error heuristic. Semi-infinite intervals are truncated by
// integrating successive doubling shells until a shell no longer changes the
// running total.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <vector>

#include "hetnet/errors.hpp"

namespace hetnet {

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
  // Relative size below which a doubling shell ends a semi-infinite integral.
  double tail_cutoff_epsilon = 1e-10;
  // Shell doubling stops with NonConvergence beyond 2^ceiling_doublings * scale.
  int ceiling_doublings = 40;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

struct QuadratureEstimate {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
};

/// Natural starting length for shell doubling given a reference intensity:
/// 1/sqrt(pi*lambda), or 1 when lambda is not positive.
double nearest_neighbor_scale(double lambda_ref);

namespace detail {

// 21-point Kronrod abscissae on [0,1]; odd entries are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452338, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Segment kronrod21(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double gauss = 0.0;
  double kronrod = kKronrodWeights[10] * fc;
  double abs_sum = std::abs(kronrod);
  std::array<double, 10> f_lo{};
  std::array<double, 10> f_hi{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double y1 = f(center - dx);
    const double y2 = f(center + dx);
    f_lo[j] = y1;
    f_hi[j] = y2;
    kronrod += kKronrodWeights[j] * (y1 + y2);
    abs_sum += kKronrodWeights[j] * (std::abs(y1) + std::abs(y2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (y1 + y2);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));
  }

  const double scale = std::abs(half);
  const double value = kronrod * half;
  abs_sum *= scale;
  asc *= scale;
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  if (abs_sum > uflow / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
  return {a, b, value, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
///
/// Stops once the summed error estimate is at most
/// max(abs_tol, rel_tol * |I|). Throws NonConvergence (carrying the best
/// estimate and its error) when max_subdivisions segments are in use or a
/// segment cannot be split further in floating point.
template <class F>
  requires std::invocable<F&, double>
QuadratureEstimate integrate_adaptive(F&& f, double a, double b,
                                      const QuadratureConfig& cfg) {
  if (!(a <= b)) throw DomainError("integrate: lower limit exceeds upper limit");
  if (a == b) return {};

  auto by_error = [](const detail::Segment& x, const detail::Segment& y) {
    return x.error < y.error;
  };
  std::vector<detail::Segment> heap;
  heap.reserve(static_cast<std::size_t>(cfg.max_subdivisions) + 1);
  heap.push_back(detail::kronrod21(f, a, b));
  double total = heap.front().value;
  double error = heap.front().error;

  while (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= cfg.max_subdivisions) {
      throw NonConvergence("integrate: subdivision limit reached", total, error);
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const detail::Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw NonConvergence("integrate: segment below floating-point resolution", total,
                           error);
    }
    const auto left = detail::kronrod21(f, worst.a, mid);
    const auto right = detail::kronrod21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  for (const auto& s : heap) {
    total += s.value;
    error += s.error;
  }
  return {total, error, static_cast<int>(heap.size())};
}

template <class F>
  requires std::invocable<F&, double>
double integrate_finite(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  return integrate_adaptive(f, a, b, cfg).value;
}

/// Integral of f over [a, inf).
///
/// Integrates [a, a+scale], then shells of doubling width, and stops when a
/// shell contributes at most tail_cutoff_epsilon of the running total. Tail
/// shells are only resolved to rel_tol of the running total. An integrand
/// that stays identically zero up to the ceiling integrates to zero.
template <class F>
  requires std::invocable<F&, double>
double integrate_semi_infinite(F&& f, double a, const QuadratureConfig& cfg = {},
                               double scale = 1.0) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("integrate_semi_infinite: scale must be positive and finite");
  }
  const double ceiling = std::ldexp(scale, cfg.ceiling_doublings);
  double total = integrate_finite(f, a, a + scale, cfg);
  double lo = a + scale;
  double width = scale;
  QuadratureConfig shell_cfg = cfg;
  for (;;) {
    const double hi = lo + width;
    if (hi - a > ceiling) {
      if (total == 0.0) return 0.0;
      throw NonConvergence("integrate_semi_infinite: no tail decay before ceiling", total,
                           std::abs(total) * cfg.tail_cutoff_epsilon);
    }
    shell_cfg.abs_tol = std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * std::abs(total));
    const double shell = integrate_finite(f, lo, hi, shell_cfg);
    total += shell;
    if (total != 0.0 && std::abs(shell) <= cfg.tail_cutoff_epsilon * std::abs(total)) {
      return total;
    }
    lo = hi;
    width *= 2.0;
  }
}

}  // namespace hetnet
