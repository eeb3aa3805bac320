#pragma once

// Monte Carlo coverage and association estimates. Each trial draws a scene,
// associates the user with the base station of maximum average received
// power, draws unit-mean exponential fading for every base station and
// evaluates the SINR with all other in-window stations as interferers.
//
// Trial t uses stream make_stream(seed, t), and aggregation runs in trial
// order, so results do not depend on the worker count.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hetnet/network.hpp"
#include "hetnet/pointprocess.hpp"

namespace hetnet {

struct TrialOutcome {
  std::size_t serving_tier = 0;
  double serving_distance = 0.0;
  double sinr = 0.0;  // +inf when there is neither noise nor interference
  std::vector<bool> covered_at;  // one flag per requested threshold
};

struct McEstimate {
  std::size_t trials = 0;
  double p_hat = 0.0;
  double ci_halfwidth = 0.0;            // 95% normal-approximation binomial
  std::vector<double> per_tier_joint;   // P(SINR > tau_i, S_i)
  std::vector<double> association;      // P(S_i)
  std::size_t empty_scene_resamples = 0;
};

struct McOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;  // 0 means hardware concurrency
};

/// One trial. Empty scenes are redrawn from the same stream; the number of
/// redraws is added to `empty_resamples` when given.
TrialOutcome run_trial(const NetworkModel& net, const WindowPolicy& policy,
                       std::span<const double> taus, Engine& rng,
                       std::size_t* empty_resamples = nullptr);

/// Association, fading and SINR for a given scene. Base stations farther
/// than `interference_radius` from the user are ignored.
TrialOutcome evaluate_scene(const NetworkModel& net, const Scene& scene,
                            std::span<const double> taus, Engine& rng,
                            double interference_radius = std::numeric_limits<double>::infinity());

/// Coverage with a per-tier threshold vector (one entry per tier).
McEstimate estimate_coverage(const NetworkModel& net, const WindowPolicy& policy,
                             const std::vector<double>& tier_taus, const McOptions& opts);

/// One estimate per common threshold, all from the same set of trials.
std::vector<McEstimate> estimate_coverage_sweep(const NetworkModel& net,
                                                const WindowPolicy& policy,
                                                const std::vector<double>& taus,
                                                const McOptions& opts);

/// Change in coverage at each common threshold when the window grows from
/// R to 2R. Each trial draws one scene on the 2R window and evaluates it
/// with and without the outer ring, so the difference is not swamped by
/// sampling noise. Returns p(2R) - p(R) per threshold.
std::vector<double> window_convergence(const NetworkModel& net, const WindowPolicy& policy,
                                       const std::vector<double>& taus, const McOptions& opts);

/// Empirical association probabilities.
std::vector<double> estimate_association(const NetworkModel& net, const WindowPolicy& policy,
                                         const McOptions& opts);

/// 1.96 sqrt(p (1 - p) / n)
double binomial_ci_halfwidth(double p, std::size_t n);

}  // namespace hetnet
