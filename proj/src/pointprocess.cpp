#include "hetnet/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

std::size_t poisson_count(double mean, Engine& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<long long> dist(mean);
  return static_cast<std::size_t>(dist(rng));
}

// Uniform point of the unit disc by rejection from the enclosing square.
Point unit_disc_point(Engine& rng, double& s) {
  for (;;) {
    const double u = 2.0 * uniform_open01(rng) - 1.0;
    const double v = 2.0 * uniform_open01(rng) - 1.0;
    s = u * u + v * v;
    if (s <= 1.0 && s > 0.0) return {u, v};
  }
}

Point unit_direction(Engine& rng) {
  double s = 0.0;
  const Point p = unit_disc_point(rng, s);
  const double inv = 1.0 / std::sqrt(s);
  return {p.x * inv, p.y * inv};
}

Point uniform_in_disc(double radius, Engine& rng) {
  double s = 0.0;
  const Point p = unit_disc_point(rng, s);
  return {radius * p.x, radius * p.y};
}

// Pair of independent standard normals (Marsaglia polar method).
Point standard_normal_pair(Engine& rng) {
  double s = 0.0;
  const Point p = unit_disc_point(rng, s);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  return {p.x * f, p.y * f};
}

double kernel_margin(const OffspringKernel& kernel, const WindowPolicy& policy) {
  return kernel.is_gaussian() ? policy.parent_margin_sigmas * kernel.sigma()
                              : kernel.disc_radius();
}

// Distance of a draw from the kernel's radial law around the origin.
double kernel_radius(const OffspringKernel& kernel, Engine& rng) {
  if (kernel.is_gaussian()) {
    const double s = kernel.sigma();
    return std::sqrt(2.0 * s * s * exponential1(rng));
  }
  return kernel.disc_radius() * std::sqrt(uniform_open01(rng));
}

}  // namespace

Engine make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(stream), hi32(stream)};
  return Engine(seq);
}

double Point::norm() const noexcept { return std::hypot(x, y); }

void WindowPolicy::validate() const {
  if (!(sim_radius > 0.0) || !std::isfinite(sim_radius)) {
    throw ConfigError("must be > 0", "mc.window.sim_radius");
  }
  if (!(parent_margin_sigmas >= 0.0) || !std::isfinite(parent_margin_sigmas)) {
    throw ConfigError("must be >= 0", "mc.window.parent_margin_sigmas");
  }
}

WindowPolicy default_window(const NetworkModel& net, double tau_max, double epsilon) {
  const double alpha = net.alpha;
  double lam_pow = 0.0;  // sum_k lambda_k P_k^(2/alpha)
  double lam_p = 0.0;    // sum_k lambda_k P_k
  double lambda_min = 0.0;
  for (const auto& t : net.tiers) {
    const double lam = t.mean_intensity();
    if (!(lam > 0.0)) continue;
    lam_pow += lam * std::pow(t.power, 2.0 / alpha);
    lam_p += lam * t.power;
    lambda_min = lambda_min > 0.0 ? std::min(lambda_min, lam) : lam;
  }
  WindowPolicy policy;
  if (!(lam_pow > 0.0)) return policy;

  // Nearest tier members should all be inside the window.
  double radius = 4.0 / std::sqrt(std::numbers::pi * lambda_min);

  // A PPP approximation of E[S^-1] at the typical link, times the mean
  // interference received from beyond R, bounds the coverage lost by
  // truncating the interference field at threshold tau_max.
  if (tau_max > 0.0 && std::isfinite(tau_max)) {
    const double mean_link = std::tgamma(1.0 + alpha / 2.0) /
                             std::pow(std::numbers::pi * lam_pow, alpha / 2.0);
    const double scale =
        tau_max * mean_link * 2.0 * std::numbers::pi * lam_p / ((alpha - 2.0) * epsilon);
    radius = std::max(radius, std::pow(scale, 1.0 / (alpha - 2.0)));
  }
  policy.sim_radius = std::ceil(radius / 100.0) * 100.0;
  return policy;
}

std::size_t Scene::total_points() const {
  std::size_t n = 0;
  for (const auto& tier : points_per_tier) n += tier.size();
  return n;
}

std::vector<Point> sample_ppp(double lambda, double radius, Engine& rng) {
  std::vector<Point> pts;
  if (!(lambda > 0.0)) return pts;
  const std::size_t n = poisson_count(lambda * std::numbers::pi * radius * radius, rng);
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(uniform_in_disc(radius, rng));
  return pts;
}

void sample_cluster(const OffspringKernel& kernel, double mbar, Point center, double radius,
                    Engine& rng, std::vector<Point>& out) {
  if (!(mbar > 0.0)) return;
  const double r2 = radius * radius;
  if (kernel.is_gaussian()) {
    // Members closer to the parent than `gap` can never reach the window.
    // Their count is thinned away and the rest get a Rayleigh radius
    // conditioned to exceed `gap`.
    const double s2 = 2.0 * kernel.sigma() * kernel.sigma();
    const double gap = std::max(0.0, center.norm() - radius);
    const double gap2 = gap * gap;
    if (gap == 0.0) {
      const double sigma = kernel.sigma();
      const std::size_t n = poisson_count(mbar, rng);
      for (std::size_t i = 0; i < n; ++i) {
        const Point g = standard_normal_pair(rng);
        const Point p{center.x + sigma * g.x, center.y + sigma * g.y};
        if (p.norm2() <= r2) out.push_back(p);
      }
      return;
    }
    const std::size_t n = poisson_count(mbar * std::exp(-gap2 / s2), rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::sqrt(gap2 + s2 * exponential1(rng));
      const Point u = unit_direction(rng);
      const Point p{center.x + d * u.x, center.y + d * u.y};
      if (p.norm2() <= r2) out.push_back(p);
    }
    return;
  }
  const std::size_t n = poisson_count(mbar, rng);
  for (std::size_t i = 0; i < n; ++i) {
    const Point off = uniform_in_disc(kernel.disc_radius(), rng);
    const Point p{center.x + off.x, center.y + off.y};
    if (p.norm2() <= r2) out.push_back(p);
  }
}

std::vector<Point> sample_pcp(const TierSpec& tier, const WindowPolicy& policy, Engine& rng) {
  std::vector<Point> pts;
  if (!tier.is_cluster() || !(tier.parent_lambda > 0.0) || !(tier.mbar > 0.0)) return pts;
  const double outer = policy.sim_radius + kernel_margin(tier.kernel, policy);
  const std::size_t parents =
      poisson_count(tier.parent_lambda * std::numbers::pi * outer * outer, rng);
  pts.reserve(static_cast<std::size_t>(tier.mean_intensity() * std::numbers::pi *
                                       policy.sim_radius * policy.sim_radius * 1.1) +
              16);
  for (std::size_t i = 0; i < parents; ++i) {
    const Point parent = uniform_in_disc(outer, rng);
    sample_cluster(tier.kernel, tier.mbar, parent, policy.sim_radius, rng, pts);
  }
  return pts;
}

Scene build_scene(const NetworkModel& net, const WindowPolicy& policy, Engine& rng) {
  net.validate();
  policy.validate();
  Scene scene;
  scene.window_radius = policy.sim_radius;
  scene.points_per_tier.resize(net.size());

  if (net.user.type == UserType::Type2) {
    const OffspringKernel uk = net.user_kernel();
    const Point center{kernel_radius(uk, rng), 0.0};
    const TierSpec& tq = net.tiers[net.user.q];
    auto& dest = scene.points_per_tier[net.user.q];
    sample_cluster(tq.kernel, tq.mbar, center, policy.sim_radius, rng, dest);
    scene.representative_center = center;
    scene.representative_count = dest.size();
  }

  for (std::size_t k = 0; k < net.size(); ++k) {
    const TierSpec& t = net.tiers[k];
    auto pts = t.is_cluster() ? sample_pcp(t, policy, rng)
                              : sample_ppp(t.lambda, policy.sim_radius, rng);
    auto& dest = scene.points_per_tier[k];
    dest.insert(dest.end(), pts.begin(), pts.end());
  }
  return scene;
}

Scene build_scene(const NetworkModel& net, const WindowPolicy& policy, std::uint64_t seed,
                  std::uint64_t stream) {
  Engine rng = make_stream(seed, stream);
  Scene scene = build_scene(net, policy, rng);
  scene.rng_seed = seed;
  scene.stream = stream;
  return scene;
}

void write_scene_csv(const Scene& scene, std::ostream& out) {
  out << "x_m,y_m,tier\n";
  char buf[96];
  for (std::size_t k = 0; k < scene.points_per_tier.size(); ++k) {
    for (const Point& p : scene.points_per_tier[k]) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu\n", p.x, p.y, k + 1);
      out << buf;
    }
  }
}

}  // namespace hetnet
