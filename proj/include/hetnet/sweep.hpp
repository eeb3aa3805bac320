#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/config.hpp"

namespace hetnet {

struct SweepRow {
  double sweep_value = 0.0;
  double tau_db = 0.0;
  Engines engine = Engines::Analytic;  // Analytic or MonteCarlo
  double pc_total = 0.0;
  std::vector<double> pc_tier;
  std::vector<double> assoc_tier;
  std::optional<double> mc_ci_halfwidth;
  std::optional<double> wall_ms;
  std::string error;  // non-empty when the cell failed

  // Monte Carlo bookkeeping, reported in the JSON output only.
  std::size_t mc_trials = 0;
  std::size_t empty_scene_resamples = 0;
  std::optional<double> sim_radius;
  std::optional<double> window_delta;  // p(2R) - p(R) when checked

  bool failed() const noexcept { return !error.empty(); }
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sweep order; analytic before mc at each point
  std::optional<double> wall_ms;

  bool any_failed() const noexcept;
};

struct SweepOptions {
  bool timing = true;  // false leaves every wall_ms unset
};

/// Evaluates every sweep point with the configured engines. Failures are
/// recorded on their rows and do not stop the run.
SweepResult run_sweep(const RunConfig& cfg, const SweepOptions& opts = {});

}  // namespace hetnet
