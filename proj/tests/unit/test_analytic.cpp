#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"

using namespace hetnet;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPppLimit = 0.5600991535115574;  // 1 / (1 + pi/4)

NetworkModel two_tier(double sigma, bool type2 = false, bool disc = false) {
  NetworkModel net;
  const auto k = disc ? OffspringKernel::uniform_disc(sigma) : OffspringKernel::gaussian(sigma);
  net.tiers = {TierSpec::cluster(1e-4, 10.0, k, 1.0), TierSpec::poisson(1e-6, 1000.0)};
  if (type2) net.user = UserModel::type2(0);
  return net;
}

double assoc_sum(const NetworkModel& net) {
  double s = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) s += association_probability(net, i);
  return s;
}

}  // namespace

TEST_CASE("single PPP tier matches the closed form") {
  NetworkModel net;
  net.tiers = {TierSpec::poisson(1e-5, 1.0)};
  const auto res = coverage(net, CoverageQuery::uniform(net, 1.0));
  CHECK(std::abs(res.total - kPppLimit) < 1e-9);
  CHECK(res.association[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single PPP tier with noise") {
  // alpha = 4: int_0^inf pi lambda exp(-b v - a v^2) dv with v = r^2,
  // a = tau N0 / P and b = pi lambda rho(tau).
  const double lambda = 1e-5, P = 1.0, N0 = 2.5e-10, tau = 2.0;
  NetworkModel net;
  net.tiers = {TierSpec::poisson(lambda, P)};
  net.noise = N0;
  const double a = tau * N0 / P;
  const double b = kPi * lambda * (1.0 + std::sqrt(tau) * (kPi / 2 - std::atan(1 / std::sqrt(tau))));
  const double u = b / (2.0 * std::sqrt(a));
  const double expected = kPi * lambda * std::sqrt(kPi / (4 * a)) * std::exp(u * u) * std::erfc(u);
  const auto res = coverage(net, CoverageQuery::uniform(net, tau));
  CHECK(res.total == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("all-PPP networks are invariant to densities and powers") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> log_lambda(-7.0, -3.0), log_power(-1.0, 4.0);
  for (int draw = 0; draw < 10; ++draw) {
    NetworkModel net;
    net.tiers = {TierSpec::poisson(std::pow(10.0, log_lambda(rng)), std::pow(10.0, log_power(rng))),
                 TierSpec::poisson(std::pow(10.0, log_lambda(rng)), std::pow(10.0, log_power(rng)))};
    const double pc = coverage(net, CoverageQuery::uniform(net, 1.0)).total;
    CHECK(std::abs(pc - kPppLimit) < 1e-6);
  }
}

TEST_CASE("unequal thresholds follow the PPP closed form") {
  NetworkModel net;
  net.alpha = 3.5;
  net.tiers = {TierSpec::poisson(2e-5, 1.0), TierSpec::poisson(3e-6, 50.0),
               TierSpec::poisson(1e-6, 400.0)};
  CoverageQuery q;
  q.taus = {0.5, 2.0, 8.0};
  const double expected = coverage_ppp_closed_form({2e-5, 3e-6, 1e-6}, {1.0, 50.0, 400.0},
                                                   q.taus, 3.5);
  CHECK(coverage(net, q).total == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("association probabilities of PPP tiers") {
  NetworkModel net;
  net.tiers = {TierSpec::poisson(1e-5, 1.0), TierSpec::poisson(1e-6, 100.0)};
  // lambda_k P_k^(2/alpha) / sum_j lambda_j P_j^(2/alpha)
  const double w1 = 1e-5, w2 = 1e-6 * 10.0;
  CHECK(association_probability(net, 0) == doctest::Approx(w1 / (w1 + w2)).epsilon(1e-8));
  CHECK(association_probability(net, 1) == doctest::Approx(w2 / (w1 + w2)).epsilon(1e-8));
}

TEST_CASE("association probabilities sum to one") {
  CHECK(std::abs(assoc_sum(two_tier(20.0)) - 1.0) < 1e-5);
  CHECK(std::abs(assoc_sum(two_tier(20.0, true)) - 1.0) < 1e-5);
  CHECK(std::abs(assoc_sum(two_tier(40.0, false, true)) - 1.0) < 1e-5);
  CHECK(std::abs(assoc_sum(two_tier(40.0, true, true)) - 1.0) < 1e-5);
}

TEST_CASE("coverage terms are bounded by association") {
  const auto net = two_tier(20.0, true);
  const auto res = coverage(net, CoverageQuery::uniform(net, 0.5));
  for (std::size_t i = 0; i < net.size(); ++i) {
    CHECK(res.per_tier[i] >= 0.0);
    CHECK(res.per_tier[i] <= res.association[i] + 1e-9);
  }
  CHECK(res.total == doctest::Approx(res.per_tier[0] + res.per_tier[1]));
}

TEST_CASE("coverage is non-increasing in the threshold") {
  const auto net = two_tier(20.0);
  double prev = 1.0;
  for (double db : {-10.0, -4.0, 0.0, 4.0, 10.0}) {
    const double pc = coverage(net, CoverageQuery::uniform(net, db_to_linear(db))).total;
    CHECK(pc <= prev + 1e-9);
    prev = pc;
  }
}

TEST_CASE("user model mismatch is reported") {
  const auto t1 = two_tier(20.0);
  const auto t2 = two_tier(20.0, true);
  CHECK_THROWS_AS(coverage_tier_type2(t1, CoverageQuery::uniform(t1, 1.0), 0), ConfigError);
  CHECK_THROWS_AS(coverage_tier_type1(t2, CoverageQuery::uniform(t2, 1.0), 0), ConfigError);
}

TEST_CASE("empty cluster tier contributes nothing") {
  NetworkModel net;
  net.tiers = {TierSpec::cluster(1e-4, 0.0, OffspringKernel::gaussian(20.0), 1.0),
               TierSpec::poisson(1e-5, 1.0)};
  const auto res = coverage(net, CoverageQuery::uniform(net, 1.0));
  CHECK(res.per_tier[0] == 0.0);
  CHECK(res.total == doctest::Approx(kPppLimit).epsilon(1e-8));
}

TEST_CASE("large clusters approach the PPP limit") {
  const auto t1 = two_tier(1000.0);
  const auto t2 = two_tier(1000.0, true);
  CHECK(std::abs(coverage(t1, CoverageQuery::uniform(t1, 1.0)).total - kPppLimit) < 1e-4);
  CHECK(std::abs(coverage(t2, CoverageQuery::uniform(t2, 1.0)).total - kPppLimit) < 1e-4);
}

TEST_CASE("equi-coverage scaling") {
  const auto net = two_tier(20.0);
  const double base = coverage(net, CoverageQuery::uniform(net, 1.0)).total;
  for (double l : {0.5, 3.0}) {
    const auto scaled = scale_network(net, l);
    CHECK(scaled.tiers[0].kernel.sigma() == doctest::Approx(20.0 * l));
    CHECK(coverage(scaled, CoverageQuery::uniform(scaled, 1.0)).total ==
          doctest::Approx(base).epsilon(1e-6));
  }
  auto noisy = net;
  noisy.noise = 1e-12;
  CHECK_THROWS_AS(scale_network(noisy, 2.0), ConfigError);
}

TEST_CASE("conditional association and serving distance") {
  const auto net = two_tier(20.0);
  const ParentDistances parents = {{15.0, 60.0, 140.0, 300.0}, {}};
  const double a0 = association_probability_given_parents(net, 0, parents);
  const double a1 = association_probability_given_parents(net, 1, parents);
  CHECK(a0 + a1 == doctest::Approx(1.0).epsilon(1e-6));

  // The serving-distance density integrates to one.
  const double mass = integrate_semi_infinite(
      [&](double r) { return serving_distance_pdf_given_parents(net, 0, parents, r); }, 0.0, {},
      10.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("conditioning on an impossible association") {
  // One parent very far away and a dense PPP tier.
  NetworkModel net;
  net.tiers = {TierSpec::cluster(1e-4, 10.0, OffspringKernel::uniform_disc(10.0), 1.0),
               TierSpec::poisson(1e-2, 1.0)};
  const ParentDistances parents = {{1e5}, {}};
  CHECK(association_probability_given_parents(net, 0, parents) < 1e-300);
  CHECK_THROWS_AS(serving_distance_pdf_given_parents(net, 0, parents, 5.0), DegenerateCondition);
}

TEST_CASE("PPP closed-form validation") {
  CHECK_THROWS_AS(coverage_ppp_closed_form({1e-5}, {1.0}, {1.0}, 2.0), DomainError);
  CHECK_THROWS_AS(coverage_ppp_closed_form({1e-5, 1e-6}, {1.0}, {1.0}, 4.0), DomainError);
  CHECK(coverage_ppp_closed_form({1e-5}, {1.0}, {1.0}, 4.0) ==
        doctest::Approx(kPppLimit).epsilon(1e-14));
}
