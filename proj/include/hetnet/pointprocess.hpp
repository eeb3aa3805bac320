#pragma once

// Samplers for PPP and Poisson-cluster base-station layouts on a disc window
// centered on the typical user, and Type 1 / Type 2 scene construction.

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "hetnet/network.hpp"

namespace hetnet {

using Engine = std::mt19937_64;

/// Independent, reproducible stream `stream` of a run seeded with `seed`.
/// Streams depend only on (seed, stream), never on scheduling.
Engine make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform on the open interval (0, 1) from the top 53 bits of one draw.
inline double uniform_open01(Engine& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Unit-mean exponential variate.
inline double exponential1(Engine& rng) { return -std::log(uniform_open01(rng)); }

struct Point {
  double x = 0.0;
  double y = 0.0;

  double norm2() const noexcept { return x * x + y * y; }
  double norm() const noexcept;
};

struct WindowPolicy {
  double sim_radius = 5000.0;          // meters; base stations beyond are ignored
  double parent_margin_sigmas = 6.0;   // Gaussian parents drawn out to R + k sigma
  bool convergence_check = false;      // re-run at 2R and report the change

  void validate() const;
};

/// Window sized so that the mean interference beyond it shifts coverage at
/// threshold `tau_max` by about `epsilon`, and so that every tier with
/// positive intensity is empty inside it with probability below e^-16.
WindowPolicy default_window(const NetworkModel& net, double tau_max, double epsilon = 2e-3);

struct Scene {
  std::vector<std::vector<Point>> points_per_tier;
  double window_radius = 0.0;
  std::uint64_t rng_seed = 0;
  std::uint64_t stream = 0;
  // Type 2 only: center of the user's own cluster and how many of its
  // members fell inside the window.
  std::optional<Point> representative_center;
  std::size_t representative_count = 0;

  std::size_t total_points() const;
};

/// Homogeneous PPP of intensity `lambda` on the disc of radius `radius`.
std::vector<Point> sample_ppp(double lambda, double radius, Engine& rng);

/// Members of one cluster centered at `center` that land inside the window.
/// Gaussian members are drawn by thinning: only displacements long enough
/// to reach the window are generated, which leaves the retained points
/// exactly distributed.
void sample_cluster(const OffspringKernel& kernel, double mbar, Point center, double radius,
                    Engine& rng, std::vector<Point>& out);

/// Poisson cluster process restricted to the window. Parents are drawn on a
/// disc enlarged by the kernel margin.
std::vector<Point> sample_pcp(const TierSpec& tier, const WindowPolicy& policy, Engine& rng);

/// Draws a full scene around the typical user at the origin.
Scene build_scene(const NetworkModel& net, const WindowPolicy& policy, Engine& rng);
Scene build_scene(const NetworkModel& net, const WindowPolicy& policy, std::uint64_t seed,
                  std::uint64_t stream = 0);

/// CSV with header `x_m,y_m,tier` (tier is 1-based).
void write_scene_csv(const Scene& scene, std::ostream& out);

}  // namespace hetnet
