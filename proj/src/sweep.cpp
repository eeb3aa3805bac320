#include "hetnet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/montecarlo.hpp"

namespace hetnet {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void run_pool(std::vector<std::function<void()>>& tasks, unsigned workers) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
  if (workers <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) tasks[i]();
    });
  }
}

void mark_failed(SweepRow& row, std::size_t tiers, const std::string& message) {
  row.error = message;
  row.pc_total = kNaN;
  row.pc_tier.assign(tiers, kNaN);
  if (row.assoc_tier.empty()) row.assoc_tier.assign(tiers, kNaN);
}

template <class F>
void guarded(SweepRow& row, std::size_t tiers, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    mark_failed(row, tiers, e.what());
  }
}

}  // namespace

bool SweepResult::any_failed() const noexcept {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.failed(); });
}

SweepResult run_sweep(const RunConfig& cfg, const SweepOptions& opts) {
  const auto start = Clock::now();
  const SweepSpec& sw = cfg.sweep;
  const std::size_t points = sw.values.size();
  const std::size_t tiers = cfg.network.size();
  const bool analytic = cfg.engines != Engines::MonteCarlo;
  const bool mc = cfg.engines != Engines::Analytic;
  const bool tau_axis = sw.axis == SweepAxis::TauDb;

  std::vector<SweepRow> an_rows(analytic ? points : 0);
  std::vector<SweepRow> mc_rows(mc ? points : 0);
  for (std::size_t i = 0; i < points; ++i) {
    for (auto* rows : {&an_rows, &mc_rows}) {
      if (rows->empty()) continue;
      SweepRow& r = (*rows)[i];
      r.sweep_value = sw.values[i];
      r.tau_db = sw.tau_db_at(i);
      r.engine = rows == &an_rows ? Engines::Analytic : Engines::MonteCarlo;
    }
  }

  // Association does not depend on the threshold, so a threshold sweep
  // needs it once.
  const std::size_t assoc_count = analytic ? (tau_axis ? 1 : points) : 0;
  std::vector<std::vector<double>> assoc(assoc_count);
  std::vector<std::string> assoc_error(assoc_count);
  std::vector<double> assoc_ms(assoc_count, 0.0);
  RhoCache rho_cache;

  std::vector<std::function<void()>> tasks;
  for (std::size_t a = 0; a < assoc_count; ++a) {
    tasks.emplace_back([&, a] {
      const auto t0 = Clock::now();
      try {
        const NetworkModel net = cfg.network_at(a);
        for (std::size_t k = 0; k < tiers; ++k) {
          assoc[a].push_back(association_probability(net, k, cfg.quad));
        }
      } catch (const std::exception& e) {
        assoc_error[a] = e.what();
      }
      assoc_ms[a] = elapsed_ms(t0);
    });
  }
  for (std::size_t i = 0; i < an_rows.size(); ++i) {
    tasks.emplace_back([&, i] {
      SweepRow& row = an_rows[i];
      const auto t0 = Clock::now();
      guarded(row, tiers, [&] {
        const NetworkModel net = cfg.network_at(i);
        CoverageQuery q = CoverageQuery::uniform(net, sw.tau_at(i), cfg.quad);
        q.z_truncation_multiplier = cfg.z_truncation;
        row.pc_total = 0.0;
        for (std::size_t k = 0; k < tiers; ++k) {
          row.pc_tier.push_back(coverage_tier(net, q, k, &rho_cache));
          row.pc_total += row.pc_tier.back();
        }
      });
      row.wall_ms = elapsed_ms(t0);
    });
  }

  // A threshold sweep shares one set of trials across all thresholds.
  const std::size_t mc_batches = mc ? (tau_axis ? 1 : points) : 0;
  for (std::size_t b = 0; b < mc_batches; ++b) {
    tasks.emplace_back([&, b] {
      const std::size_t first = b;
      const std::size_t last = tau_axis ? points : b + 1;
      const auto t0 = Clock::now();
      std::vector<double> taus;
      for (std::size_t i = first; i < last; ++i) taus.push_back(sw.tau_at(i));
      McOptions mo;
      mo.trials = cfg.mc.trials;
      mo.seed = cfg.mc.seed;
      mo.workers = cfg.mc.workers;
      try {
        const NetworkModel net = cfg.network_at(b);
        const WindowPolicy window = cfg.window_for(net);
        const auto est = estimate_coverage_sweep(net, window, taus, mo);
        std::vector<double> delta;
        if (window.convergence_check) delta = window_convergence(net, window, taus, mo);
        for (std::size_t i = first; i < last; ++i) {
          const McEstimate& e = est[i - first];
          SweepRow& row = mc_rows[i];
          row.pc_total = e.p_hat;
          row.pc_tier = e.per_tier_joint;
          row.assoc_tier = e.association;
          row.mc_ci_halfwidth = e.ci_halfwidth;
          row.mc_trials = e.trials;
          row.empty_scene_resamples = e.empty_scene_resamples;
          row.sim_radius = window.sim_radius;
          if (!delta.empty()) row.window_delta = delta[i - first];
        }
      } catch (const std::exception& e) {
        for (std::size_t i = first; i < last; ++i) mark_failed(mc_rows[i], tiers, e.what());
      }
      const double ms = elapsed_ms(t0);
      for (std::size_t i = first; i < last; ++i) mc_rows[i].wall_ms = ms;
    });
  }

  run_pool(tasks, cfg.workers);

  SweepResult result;
  result.rows.reserve(an_rows.size() + mc_rows.size());
  for (std::size_t i = 0; i < points; ++i) {
    if (analytic) {
      SweepRow& row = an_rows[i];
      const std::size_t a = tau_axis ? 0 : i;
      if (!assoc_error[a].empty()) {
        row.assoc_tier.assign(tiers, kNaN);
        if (!row.failed()) mark_failed(row, tiers, assoc_error[a]);
      } else if (!row.failed()) {
        row.assoc_tier = assoc[a];
      }
      if (!tau_axis && row.wall_ms) *row.wall_ms += assoc_ms[a];
      result.rows.push_back(std::move(row));
    }
    if (mc) result.rows.push_back(std::move(mc_rows[i]));
  }
  result.wall_ms = elapsed_ms(start);
  if (!opts.timing) {
    result.wall_ms.reset();
    for (auto& r : result.rows) r.wall_ms.reset();
  }
  return result;
}

}  // namespace hetnet
