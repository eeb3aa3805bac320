#include "hetnet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

constexpr double kNoCap = std::numeric_limits<double>::infinity();

struct TrialRecord {
  std::size_t serving_tier = 0;
  double sinr = 0.0;
};

struct Simulation {
  std::vector<TrialRecord> records;
  std::size_t empty_resamples = 0;
};

// Received power over fading-free distance: |x|^-alpha.
double path_gain(double d2, double alpha) {
  if (alpha == 4.0) return 1.0 / (d2 * d2);
  return std::pow(d2, -0.5 * alpha);
}

TrialRecord evaluate(const NetworkModel& net, const Scene& scene, Engine& rng,
                     double* serving_distance, double cap = kNoCap) {
  const std::size_t k_tiers = net.size();
  const double cap2 = cap * cap;
  // Association metric d^2 / P^(2/alpha) is monotone in P d^-alpha.
  std::size_t best_tier = k_tiers;
  std::size_t best_idx = 0;
  double best_metric = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < k_tiers; ++k) {
    const auto& pts = scene.points_per_tier[k];
    std::size_t idx = pts.size();
    double d2min = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < pts.size(); ++n) {
      const double d2 = pts[n].norm2();
      if (d2 < d2min) {
        d2min = d2;
        idx = n;
      }
    }
    if (idx == pts.size() || d2min > cap2) continue;
    const double metric = d2min / std::pow(net.tiers[k].power, 2.0 / net.alpha);
    if (metric < best_metric) {
      best_metric = metric;
      best_tier = k;
      best_idx = idx;
    }
  }
  if (best_tier == k_tiers) throw DegenerateCondition("scene has no base station");

  // Fading is drawn for every point, capped or not, so that evaluations of
  // one scene under different caps see the same fading.
  double signal = 0.0;
  double interference = 0.0;
  for (std::size_t k = 0; k < k_tiers; ++k) {
    const double power = net.tiers[k].power;
    const auto& pts = scene.points_per_tier[k];
    double tier_sum = 0.0;
    for (std::size_t n = 0; n < pts.size(); ++n) {
      const double h = exponential1(rng);
      const double d2 = pts[n].norm2();
      if (d2 > cap2) continue;
      const double g = h * path_gain(d2, net.alpha);
      if (k == best_tier && n == best_idx) {
        signal = power * g;
      } else {
        tier_sum += g;
      }
    }
    interference += power * tier_sum;
  }

  const double d2 = scene.points_per_tier[best_tier][best_idx].norm2();
  if (serving_distance) *serving_distance = std::sqrt(d2);
  const double denom = net.noise + interference;
  TrialRecord rec;
  rec.serving_tier = best_tier;
  rec.sinr = denom > 0.0 ? signal / denom : std::numeric_limits<double>::infinity();
  return rec;
}

TrialRecord trial_record(const NetworkModel& net, const WindowPolicy& policy, Engine& rng,
                         std::size_t& empty_resamples, double* serving_distance) {
  bool any = false;
  for (const auto& t : net.tiers) any = any || t.mean_intensity() > 0.0;
  if (!any) throw DegenerateCondition("every tier has zero intensity");
  for (;;) {
    Scene scene = build_scene(net, policy, rng);
    if (scene.total_points() > 0) return evaluate(net, scene, rng, serving_distance);
    ++empty_resamples;
  }
}

Simulation simulate(const NetworkModel& net, const WindowPolicy& policy, const McOptions& opts) {
  net.validate();
  policy.validate();
  if (opts.trials == 0) throw ConfigError("must be >= 1", "mc.trials");

  Simulation sim;
  sim.records.resize(opts.trials);
  unsigned workers = opts.workers ? opts.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(opts.trials)));
  std::vector<std::size_t> empties(workers, 0);
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](unsigned w) {
    try {
      for (std::size_t t = w; t < opts.trials; t += workers) {
        Engine rng = make_stream(opts.seed, t);
        sim.records[t] = trial_record(net, policy, rng, empties[w], nullptr);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t e : empties) sim.empty_resamples += e;
  return sim;
}

template <class Covered>
McEstimate aggregate(const Simulation& sim, std::size_t k_tiers, Covered covered) {
  McEstimate est;
  est.trials = sim.records.size();
  est.empty_scene_resamples = sim.empty_resamples;
  std::vector<std::size_t> joint(k_tiers, 0);
  std::vector<std::size_t> assoc(k_tiers, 0);
  std::size_t total = 0;
  for (const auto& rec : sim.records) {
    ++assoc[rec.serving_tier];
    if (covered(rec)) {
      ++joint[rec.serving_tier];
      ++total;
    }
  }
  const double n = static_cast<double>(est.trials);
  est.p_hat = static_cast<double>(total) / n;
  est.ci_halfwidth = binomial_ci_halfwidth(est.p_hat, est.trials);
  est.per_tier_joint.resize(k_tiers);
  est.association.resize(k_tiers);
  for (std::size_t k = 0; k < k_tiers; ++k) {
    est.per_tier_joint[k] = static_cast<double>(joint[k]) / n;
    est.association[k] = static_cast<double>(assoc[k]) / n;
  }
  return est;
}

}  // namespace

double binomial_ci_halfwidth(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return 1.96 * std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

TrialOutcome run_trial(const NetworkModel& net, const WindowPolicy& policy,
                       std::span<const double> taus, Engine& rng,
                       std::size_t* empty_resamples) {
  std::size_t empties = 0;
  TrialOutcome out;
  const TrialRecord rec = trial_record(net, policy, rng, empties, &out.serving_distance);
  if (empty_resamples) *empty_resamples += empties;
  out.serving_tier = rec.serving_tier;
  out.sinr = rec.sinr;
  out.covered_at.reserve(taus.size());
  for (double t : taus) out.covered_at.push_back(rec.sinr > t);
  return out;
}

TrialOutcome evaluate_scene(const NetworkModel& net, const Scene& scene,
                            std::span<const double> taus, Engine& rng,
                            double interference_radius) {
  TrialOutcome out;
  const TrialRecord rec = evaluate(net, scene, rng, &out.serving_distance, interference_radius);
  out.serving_tier = rec.serving_tier;
  out.sinr = rec.sinr;
  out.covered_at.reserve(taus.size());
  for (double t : taus) out.covered_at.push_back(rec.sinr > t);
  return out;
}

McEstimate estimate_coverage(const NetworkModel& net, const WindowPolicy& policy,
                             const std::vector<double>& tier_taus, const McOptions& opts) {
  if (tier_taus.size() != net.size()) {
    throw ConfigError("one threshold per tier is required", "taus");
  }
  const Simulation sim = simulate(net, policy, opts);
  return aggregate(sim, net.size(), [&](const TrialRecord& r) {
    return r.sinr > tier_taus[r.serving_tier];
  });
}

std::vector<McEstimate> estimate_coverage_sweep(const NetworkModel& net,
                                                const WindowPolicy& policy,
                                                const std::vector<double>& taus,
                                                const McOptions& opts) {
  const Simulation sim = simulate(net, policy, opts);
  std::vector<McEstimate> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    out.push_back(aggregate(sim, net.size(), [tau](const TrialRecord& r) { return r.sinr > tau; }));
  }
  return out;
}

std::vector<double> window_convergence(const NetworkModel& net, const WindowPolicy& policy,
                                       const std::vector<double>& taus, const McOptions& opts) {
  net.validate();
  policy.validate();
  if (opts.trials == 0) throw ConfigError("must be >= 1", "mc.trials");
  if (std::none_of(net.tiers.begin(), net.tiers.end(),
                   [](const TierSpec& t) { return t.mean_intensity() > 0.0; })) {
    throw DegenerateCondition("every tier has zero intensity");
  }
  WindowPolicy wide = policy;
  wide.sim_radius *= 2.0;
  std::vector<long long> diff(taus.size(), 0);
  for (std::size_t t = 0; t < opts.trials; ++t) {
    // Redraw until the inner window holds a base station, as a trial on
    // the smaller window would.
    Engine rng = make_stream(opts.seed, t);
    Scene scene;
    for (;;) {
      scene = build_scene(net, wide, rng);
      double nearest2 = std::numeric_limits<double>::infinity();
      for (const auto& tier : scene.points_per_tier) {
        for (const Point& p : tier) nearest2 = std::min(nearest2, p.norm2());
      }
      if (nearest2 <= policy.sim_radius * policy.sim_radius) break;
    }
    Engine fading_inner = make_stream(opts.seed, t + opts.trials);
    Engine fading_outer = fading_inner;
    const TrialRecord inner = evaluate(net, scene, fading_inner, nullptr, policy.sim_radius);
    const TrialRecord outer = evaluate(net, scene, fading_outer, nullptr);
    for (std::size_t i = 0; i < taus.size(); ++i) {
      diff[i] += static_cast<int>(outer.sinr > taus[i]) - static_cast<int>(inner.sinr > taus[i]);
    }
  }
  std::vector<double> out;
  for (long long d : diff) out.push_back(static_cast<double>(d) / static_cast<double>(opts.trials));
  return out;
}

std::vector<double> estimate_association(const NetworkModel& net, const WindowPolicy& policy,
                                         const McOptions& opts) {
  const Simulation sim = simulate(net, policy, opts);
  return aggregate(sim, net.size(), [](const TrialRecord&) { return false; }).association;
}

}  // namespace hetnet
