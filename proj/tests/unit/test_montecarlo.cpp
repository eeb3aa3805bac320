#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/montecarlo.hpp"
#include "stats.hpp"

using namespace hetnet;

namespace {

constexpr double kPppLimit = 0.5600991535115574;

Scene scene_of(std::vector<std::vector<Point>> pts, double radius = 1000.0) {
  Scene s;
  s.points_per_tier = std::move(pts);
  s.window_radius = radius;
  return s;
}

NetworkModel single_ppp(double lambda = 1e-4) {
  NetworkModel net;
  net.tiers = {TierSpec::poisson(lambda, 1.0)};
  return net;
}

McOptions options(std::size_t trials, std::uint64_t seed = 11, unsigned workers = 1) {
  McOptions o;
  o.trials = trials;
  o.seed = seed;
  o.workers = workers;
  return o;
}

}  // namespace

TEST_CASE("a lone base station in an interference-free scene") {
  const auto net = single_ppp();
  Engine rng = make_stream(1, 0);
  const std::vector<double> taus = {1.0, 1e6};
  const auto out = evaluate_scene(net, scene_of({{{30.0, 40.0}}}), taus, rng);
  CHECK(out.serving_tier == 0);
  CHECK(out.serving_distance == doctest::Approx(50.0));
  CHECK(std::isinf(out.sinr));
  CHECK(out.covered_at == std::vector<bool>{true, true});
}

TEST_CASE("noise-limited link has exponential SINR") {
  auto net = single_ppp();
  net.noise = 1e-9;
  const double d = 100.0;
  const double mean_snr = std::pow(d, -4.0) / net.noise;
  Engine rng = make_stream(2, 0);
  std::vector<double> snr;
  for (int i = 0; i < 20000; ++i) {
    snr.push_back(evaluate_scene(net, scene_of({{{d, 0.0}}}), {}, rng).sinr / mean_snr);
  }
  CHECK(testing_support::ks_distance(snr, [](double x) { return 1.0 - std::exp(-x); }) < 0.02);
}

TEST_CASE("association follows biased distance") {
  NetworkModel net;
  net.tiers = {TierSpec::poisson(1e-4, 1.0), TierSpec::poisson(1e-6, 10000.0)};
  Engine rng = make_stream(3, 0);
  // Tier 2 is 100x farther in reach per unit distance: 50 m vs 400 m / 10.
  auto out = evaluate_scene(net, scene_of({{{50.0, 0.0}}, {{0.0, 400.0}}}), {}, rng);
  CHECK(out.serving_tier == 1);
  CHECK(out.serving_distance == doctest::Approx(400.0));
  out = evaluate_scene(net, scene_of({{{30.0, 0.0}}, {{0.0, 400.0}}}), {}, rng);
  CHECK(out.serving_tier == 0);
  CHECK(std::isfinite(out.sinr));
}

TEST_CASE("stations beyond the interference radius are ignored") {
  const auto net = single_ppp();
  Engine rng = make_stream(4, 0);
  const auto out = evaluate_scene(net, scene_of({{{10.0, 0.0}, {500.0, 0.0}}}), {}, rng, 100.0);
  CHECK(std::isinf(out.sinr));
  CHECK_THROWS_AS(evaluate_scene(net, scene_of({{{500.0, 0.0}}}), {}, rng, 100.0),
                  DegenerateCondition);
}

TEST_CASE("single PPP tier coverage") {
  const auto net = single_ppp();
  const auto window = default_window(net, 1.0, 5e-4);
  const auto est = estimate_coverage_sweep(net, window, {1e-9, 1.0}, options(100000));
  REQUIRE(est.size() == 2);
  CHECK(est[0].p_hat > 0.9999);
  CHECK(std::abs(est[1].p_hat - kPppLimit) < 0.005);
  CHECK(est[1].ci_halfwidth == doctest::Approx(binomial_ci_halfwidth(est[1].p_hat, 100000)));
  CHECK(est[1].association == std::vector<double>{1.0});
  CHECK(est[1].per_tier_joint[0] == est[1].p_hat);
}

TEST_CASE("estimates are consistent across thresholds and tiers") {
  NetworkModel net;
  net.tiers = {TierSpec::cluster(1e-4, 10.0, OffspringKernel::gaussian(20.0), 1.0),
               TierSpec::poisson(1e-6, 1000.0)};
  WindowPolicy w;
  w.sim_radius = 1500.0;
  const std::vector<double> taus = {0.1, 0.5, 1.0, 4.0, 10.0};
  const auto est = estimate_coverage_sweep(net, w, taus, options(3000));
  for (std::size_t i = 0; i < est.size(); ++i) {
    const auto& e = est[i];
    CHECK(e.trials == 3000);
    CHECK(std::accumulate(e.per_tier_joint.begin(), e.per_tier_joint.end(), 0.0) ==
          doctest::Approx(e.p_hat));
    CHECK(std::accumulate(e.association.begin(), e.association.end(), 0.0) ==
          doctest::Approx(1.0));
    for (std::size_t k = 0; k < 2; ++k) CHECK(e.per_tier_joint[k] <= e.association[k]);
    // Common trials make the estimate monotone in the threshold.
    if (i > 0) CHECK(e.p_hat <= est[i - 1].p_hat);
  }

  // Per-tier thresholds reduce to the common one when they agree.
  const auto same = estimate_coverage(net, w, {1.0, 1.0}, options(3000));
  CHECK(same.p_hat == est[2].p_hat);
  const auto mixed = estimate_coverage(net, w, {1.0, 10.0}, options(3000));
  CHECK(mixed.per_tier_joint[0] == est[2].per_tier_joint[0]);
  CHECK(mixed.per_tier_joint[1] == est[4].per_tier_joint[1]);
}

TEST_CASE("results do not depend on the worker count") {
  NetworkModel net;
  net.tiers = {TierSpec::cluster(1e-4, 10.0, OffspringKernel::gaussian(20.0), 1.0),
               TierSpec::poisson(1e-6, 1000.0)};
  net.user = UserModel::type2(0);
  WindowPolicy w;
  w.sim_radius = 1000.0;
  const auto one = estimate_coverage_sweep(net, w, {1.0, 3.0}, options(1500, 5, 1));
  for (unsigned workers : {2u, 3u}) {
    const auto many = estimate_coverage_sweep(net, w, {1.0, 3.0}, options(1500, 5, workers));
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(many[i].p_hat == one[i].p_hat);
      CHECK(many[i].per_tier_joint == one[i].per_tier_joint);
      CHECK(many[i].association == one[i].association);
    }
  }
  const auto other_seed = estimate_coverage_sweep(net, w, {1.0}, options(1500, 6, 1));
  CHECK(other_seed[0].p_hat != one[0].p_hat);
}

TEST_CASE("equal PPP tiers split association evenly") {
  NetworkModel net;
  net.tiers = {TierSpec::poisson(1e-4, 1.0), TierSpec::poisson(1e-4, 1.0)};
  WindowPolicy w;
  w.sim_radius = 500.0;
  const auto a = estimate_association(net, w, options(20000));
  CHECK(std::abs(a[0] - 0.5) < 0.01);
  CHECK(a[0] + a[1] == doctest::Approx(1.0));
}

TEST_CASE("association agrees with the analytic engine") {
  NetworkModel net;
  net.tiers = {TierSpec::cluster(1e-4, 10.0, OffspringKernel::gaussian(20.0), 1.0),
               TierSpec::poisson(1e-6, 1000.0)};
  const auto window = default_window(net, 0.0);
  for (auto user : {UserModel::type1(), UserModel::type2(0)}) {
    net.user = user;
    const auto mc = estimate_association(net, window, options(20000));
    for (std::size_t k = 0; k < net.size(); ++k) {
      CHECK(std::abs(mc[k] - association_probability(net, k)) < 0.01);
    }
  }
}

TEST_CASE("enlarging the window changes little") {
  const auto net = single_ppp();
  const std::vector<double> taus = {0.1, 1.0, 10.0};
  const auto window = default_window(net, 10.0);
  const auto delta = window_convergence(net, window, taus, options(5000));
  REQUIRE(delta.size() == 3);
  for (double d : delta) {
    // More interferers can only lower the SINR.
    CHECK(d <= 0.0);
    CHECK(d > -0.002);
  }
}

TEST_CASE("binomial confidence half-width") {
  CHECK(binomial_ci_halfwidth(0.5, 10000) == doctest::Approx(1.96 * 0.005));
  CHECK(binomial_ci_halfwidth(0.0, 10) == 0.0);
}
