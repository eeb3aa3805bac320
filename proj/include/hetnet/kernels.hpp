#pragma once

// Offspring kernels of Thomas and Matern cluster processes, and the distance
// laws built from them: conditional distance to a cluster member, contact
// distance, the PPP interference factor rho and the per-cluster factor used
// by the coverage integrals.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <utility>

#include "hetnet/quadrature.hpp"

namespace hetnet {

enum class KernelKind { Gaussian, UniformDisc };

/// Default truncation of Gaussian kernel integrals, in units of sigma.
inline constexpr double kDefaultTruncation = 10.0;

/// Isotropic displacement law of an offspring point around its cluster center.
class OffspringKernel {
 public:
  OffspringKernel() = default;

  /// Thomas cluster kernel, per-coordinate standard deviation `sigma` meters.
  static OffspringKernel gaussian(double sigma);
  /// Matern cluster kernel, uniform on a disc of radius `radius` meters.
  static OffspringKernel uniform_disc(double radius);

  KernelKind kind() const noexcept { return kind_; }
  bool is_gaussian() const noexcept { return kind_ == KernelKind::Gaussian; }
  /// sigma for Gaussian kernels, disc radius for uniform-disc kernels.
  double length() const noexcept { return length_; }
  double sigma() const;
  double disc_radius() const;

  OffspringKernel scaled(double factor) const;

  /// Interval outside which f(x|z) vanishes (exactly for the disc, below
  /// exp(-truncation^2/2) for the Gaussian).
  std::pair<double, double> distance_support(double z,
                                             double truncation = kDefaultTruncation) const;
  /// Distance where the uniform-disc density switches branches, or a
  /// negative value when there is no interior kink.
  double kink(double z) const;

  friend bool operator==(const OffspringKernel&, const OffspringKernel&) = default;

 private:
  OffspringKernel(KernelKind kind, double length) : kind_(kind), length_(length) {}

  KernelKind kind_ = KernelKind::Gaussian;
  double length_ = 1.0;
};

/// exp(-t) * I0(t) for t >= 0. Power series up to t = 25, Hankel asymptotic
/// expansion above; relative error below 1e-12 throughout.
double bessel_i0_scaled(double t);

/// Density of the distance from the origin of an offspring point whose
/// cluster center lies at distance z.
double conditional_distance_pdf(const OffspringKernel& kernel, double x, double z);

/// P(distance <= r) for an offspring point of a cluster centered at distance z.
double conditional_distance_cdf(const OffspringKernel& kernel, double r, double z,
                                const QuadratureConfig& cfg = {},
                                double truncation = kDefaultTruncation);

/// Integral of f(y|z) * weight(y) over y in [lo, hi] restricted to the kernel
/// support, split at the disc kink.
template <class G>
double integrate_against_distance_pdf(const OffspringKernel& kernel, double z, double lo,
                                      double hi, G&& weight, const QuadratureConfig& cfg,
                                      double truncation = kDefaultTruncation) {
  const auto [s0, s1] = kernel.distance_support(z, truncation);
  lo = std::max(lo, s0);
  hi = std::min(hi, s1);
  if (!(lo < hi)) return 0.0;
  auto integrand = [&](double y) {
    return conditional_distance_pdf(kernel, y, z) * weight(y);
  };
  // The disc density has square-root behaviour at the kink and at both ends of
  // its support; x = a + (b - a)(1 - cos(pi s)) / 2 makes it smooth in s.
  auto piece = [&](double a, double b) {
    if (kernel.is_gaussian()) return integrate_finite(integrand, a, b, cfg);
    const double h = 0.5 * (b - a);
    return integrate_finite(
        [&](double s) {
          const double x = std::min(b, a + h * (1.0 - std::cos(std::numbers::pi * s)));
          return integrand(x) * h * std::numbers::pi * std::sin(std::numbers::pi * s);
        },
        0.0, 1.0, cfg);
  };
  const double k = kernel.kink(z);
  if (k > lo && k < hi) return piece(lo, k) + piece(k, hi);
  return piece(lo, hi);
}

/// Contact distance CDF of a cluster process conditioned on its parents:
/// 1 - exp(-mbar * sum_z F(r|z)).
double contact_distance_cdf_given_parents(const OffspringKernel& kernel, double mbar,
                                          std::span<const double> parent_distances,
                                          double r, const QuadratureConfig& cfg = {});

/// Contact distance CDF of a homogeneous PPP: 1 - exp(-pi lambda r^2).
double contact_distance_cdf_ppp(double lambda, double r);

/// Memo of rho(tau, alpha). Safe for concurrent use.
class RhoCache {
 public:
  double get(double tau, double alpha);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<double, double>, double> memo_;
};

/// rho(tau, alpha) = 1 + tau^(2/alpha) * int_{tau^(-2/alpha)}^inf dt / (1 + t^(alpha/2)).
/// Closed form for alpha = 4, quadrature otherwise.
double rho(double tau, double alpha);
double rho(double tau, double alpha, RhoCache& cache);
/// The quadrature route for any alpha > 2, bypassing the alpha = 4 closed form.
double rho_by_quadrature(double tau, double alpha, const QuadratureConfig& cfg = {});

/// Parameters of one cluster factor evaluation. `pbar` is (P_j/P_k)^(1/alpha)
/// between the interfering tier j and the serving tier k.
struct ClusterFactorArgs {
  const OffspringKernel& kernel;
  double mbar;
  double tau;
  double alpha;
  double pbar;
};

/// -log C(r, z): mbar * (F(pbar r | z) + int_{pbar r}^inf f(y|z) w(y) dy) with
/// w(y) = tau (pbar r)^alpha / (y^alpha + tau (pbar r)^alpha). Zero at r = 0.
double cluster_exponent(const ClusterFactorArgs& args, double r, double z,
                        const QuadratureConfig& cfg = {},
                        double truncation = kDefaultTruncation);

/// Combined exclusion and interference factor of one cluster centered at
/// distance z, for a user served at distance r: exp(-cluster_exponent).
double cluster_factor(const OffspringKernel& kernel, double mbar, double tau, double alpha,
                      double pbar, double r, double z, const QuadratureConfig& cfg = {});

/// x^alpha with a multiply-only path for alpha = 4.
inline double path_loss_power(double x, double alpha) {
  if (alpha == 4.0) {
    const double x2 = x * x;
    return x2 * x2;
  }
  return std::pow(x, alpha);
}

}  // namespace hetnet
