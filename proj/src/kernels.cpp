#include "hetnet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hetnet {

OffspringKernel OffspringKernel::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("gaussian kernel: sigma must be positive and finite");
  }
  return {KernelKind::Gaussian, sigma};
}

OffspringKernel OffspringKernel::uniform_disc(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError("uniform disc kernel: radius must be positive and finite");
  }
  return {KernelKind::UniformDisc, radius};
}

double OffspringKernel::sigma() const {
  if (kind_ != KernelKind::Gaussian) throw DomainError("kernel has no sigma");
  return length_;
}

double OffspringKernel::disc_radius() const {
  if (kind_ != KernelKind::UniformDisc) throw DomainError("kernel has no disc radius");
  return length_;
}

OffspringKernel OffspringKernel::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("kernel scale factor must be positive");
  return {kind_, length_ * factor};
}

std::pair<double, double> OffspringKernel::distance_support(double z,
                                                            double truncation) const {
  const double reach = kind_ == KernelKind::Gaussian ? truncation * length_ : length_;
  return {std::max(0.0, z - reach), z + reach};
}

double OffspringKernel::kink(double z) const {
  if (kind_ != KernelKind::UniformDisc) return -1.0;
  if (z > 0.0 && z < length_) return length_ - z;
  return -1.0;
}

namespace {

// Fraction of a disc of radius a centred at distance z that lies within r of
// the origin.
double disc_lens_fraction(double a, double r, double z) {
  if (z >= r + a) return 0.0;
  if (z <= std::abs(a - r)) return r >= a ? 1.0 : (r * r) / (a * a);
  // Half-angles of the lens seen from the origin and from the disc centre,
  // with 1 - cos computed without cancellation.
  const double d = z - r;
  const double one_minus_c1 = (a * a - d * d) / (2.0 * z * r);
  const double c2 = ((z - r) * (z + r) + a * a) / (2.0 * z * a);
  const double t1 = 2.0 * std::asin(std::sqrt(std::clamp(0.5 * one_minus_c1, 0.0, 1.0)));
  const double t2 = std::acos(std::clamp(c2, -1.0, 1.0));
  const double k = (-z + r + a) * (z + r - a) * (z - r + a) * (z + r + a);
  const double area = r * r * t1 + a * a * t2 - 0.5 * std::sqrt(std::max(k, 0.0));
  return std::clamp(area / (std::numbers::pi * a * a), 0.0, 1.0);
}

}  // namespace

double bessel_i0_scaled(double t) {
  t = std::abs(t);
  if (t <= 25.0) {
    const double q = 0.25 * t * t;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-t);
  }
  // Hankel expansion; terms shrink until k ~ 2t, far beyond where we stop.
  const double inv8t = 1.0 / (8.0 * t);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd * inv8t / k;
    if (next >= term) break;  // asymptotic series: stop at the smallest term
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * t);
}

double conditional_distance_pdf(const OffspringKernel& kernel, double x, double z) {
  if (x < 0.0 || z < 0.0) throw DomainError("conditional_distance_pdf: negative distance");
  if (x == 0.0) return 0.0;
  const double len = kernel.length();
  if (kernel.is_gaussian()) {
    const double s2 = len * len;
    const double d = x - z;
    return x / s2 * std::exp(-0.5 * d * d / s2) * bessel_i0_scaled(x * z / s2);
  }
  const double rd2 = len * len;
  if (z <= len && x <= len - z) return 2.0 * x / rd2;
  if (x > std::abs(len - z) && x <= len + z) {
    const double c = std::clamp((x * x + z * z - rd2) / (2.0 * x * z), -1.0, 1.0);
    return 2.0 * x / (std::numbers::pi * rd2) * std::acos(c);
  }
  return 0.0;
}

double conditional_distance_cdf(const OffspringKernel& kernel, double r, double z,
                                const QuadratureConfig& cfg, double truncation) {
  if (r < 0.0 || z < 0.0) throw DomainError("conditional_distance_cdf: negative distance");
  if (r == 0.0) return 0.0;
  if (!kernel.is_gaussian()) return disc_lens_fraction(kernel.length(), r, z);
  const double p = integrate_against_distance_pdf(
      kernel, z, 0.0, r, [](double) { return 1.0; }, cfg, truncation);
  return std::clamp(p, 0.0, 1.0);
}

double contact_distance_cdf_given_parents(const OffspringKernel& kernel, double mbar,
                                          std::span<const double> parent_distances,
                                          double r, const QuadratureConfig& cfg) {
  if (mbar < 0.0) throw DomainError("contact distance: mbar must be non-negative");
  if (r < 0.0) throw DomainError("contact distance: negative r");
  double mass = 0.0;
  for (double z : parent_distances) mass += conditional_distance_cdf(kernel, r, z, cfg);
  return -std::expm1(-mbar * mass);
}

double contact_distance_cdf_ppp(double lambda, double r) {
  if (lambda < 0.0 || r < 0.0) throw DomainError("contact distance: negative argument");
  return -std::expm1(-std::numbers::pi * lambda * r * r);
}

namespace {

void check_rho_args(double tau, double alpha) {
  if (!(alpha > 2.0)) throw DomainError("rho: path-loss exponent must exceed 2");
  if (!(tau >= 0.0)) throw DomainError("rho: threshold must be non-negative");
}

}  // namespace

double rho_by_quadrature(double tau, double alpha, const QuadratureConfig& cfg) {
  check_rho_args(tau, alpha);
  if (tau == 0.0) return 1.0;
  if (std::isinf(tau)) return tau;
  const double beta = 0.5 * alpha;
  const double lower = std::pow(tau, -2.0 / alpha);
  // [lower, 1] directly; [max(lower,1), inf) through v = t^(1-beta), which
  // maps the slowly decaying power tail onto a smooth finite interval.
  double integral = 0.0;
  if (lower < 1.0) {
    integral += integrate_finite([beta](double t) { return 1.0 / (1.0 + std::pow(t, beta)); },
                                 lower, 1.0, cfg);
  }
  const double split = std::max(lower, 1.0);
  const double exponent = beta / (beta - 1.0);
  integral += integrate_finite(
                  [exponent](double v) { return 1.0 / (1.0 + std::pow(v, exponent)); }, 0.0,
                  std::pow(split, 1.0 - beta), cfg) /
              (beta - 1.0);
  return 1.0 + std::pow(tau, 2.0 / alpha) * integral;
}

double rho(double tau, double alpha) {
  check_rho_args(tau, alpha);
  if (tau == 0.0) return 1.0;
  if (alpha == 4.0) {
    if (std::isinf(tau)) return tau;
    const double s = std::sqrt(tau);
    return 1.0 + s * (0.5 * std::numbers::pi - std::atan(1.0 / s));
  }
  return rho_by_quadrature(tau, alpha);
}

double RhoCache::get(double tau, double alpha) {
  const auto key = std::make_pair(tau, alpha);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const double value = hetnet::rho(tau, alpha);
  std::lock_guard lock(mutex_);
  memo_.emplace(key, value);
  return value;
}

std::size_t RhoCache::size() const {
  std::lock_guard lock(mutex_);
  return memo_.size();
}

double rho(double tau, double alpha, RhoCache& cache) { return cache.get(tau, alpha); }

double cluster_exponent(const ClusterFactorArgs& args, double r, double z,
                        const QuadratureConfig& cfg, double truncation) {
  if (r < 0.0 || z < 0.0) throw DomainError("cluster factor: negative distance");
  if (r == 0.0 || args.mbar == 0.0) return 0.0;
  const double edge = args.pbar * r;
  double mass = args.kernel.is_gaussian()
                    ? integrate_against_distance_pdf(
                          args.kernel, z, 0.0, edge, [](double) { return 1.0; }, cfg, truncation)
                    : disc_lens_fraction(args.kernel.disc_radius(), edge, z);
  if (args.tau > 0.0) {
    const double alpha = args.alpha;
    const double inv_tau = 1.0 / args.tau;
    mass += integrate_against_distance_pdf(
        args.kernel, z, edge, std::numeric_limits<double>::infinity(),
        [edge, alpha, inv_tau](double y) {
          return 1.0 / (1.0 + path_loss_power(y / edge, alpha) * inv_tau);
        },
        cfg, truncation);
  }
  return args.mbar * std::min(mass, 1.0);
}

double cluster_factor(const OffspringKernel& kernel, double mbar, double tau, double alpha,
                      double pbar, double r, double z, const QuadratureConfig& cfg) {
  if (!(pbar > 0.0)) throw DomainError("cluster factor: power ratio must be positive");
  return std::exp(-cluster_exponent({kernel, mbar, tau, alpha, pbar}, r, z, cfg));
}

}  // namespace hetnet
