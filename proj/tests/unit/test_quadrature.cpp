#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hetnet/errors.hpp"
#include "hetnet/quadrature.hpp"

using namespace hetnet;

namespace {

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("finite integral of the standard normal density") {
  // Phi(4) - Phi(0)
  const double v = integrate_finite(std_normal_pdf, 0.0, 4.0);
  CHECK(v == doctest::Approx(0.4999683287581669).epsilon(1e-12));
}

TEST_CASE("empty interval integrates to zero") {
  CHECK(integrate_finite([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("reversed bounds are rejected") {
  CHECK_THROWS_AS(integrate_finite([](double x) { return x; }, 1.0, 0.0), DomainError);
}

TEST_CASE("semi-infinite exponential tail") {
  const double v = integrate_semi_infinite([](double x) { return std::exp(-x); }, 5.0);
  CHECK(v == doctest::Approx(0.006737946999085467).epsilon(1e-10));
}

TEST_CASE("semi-infinite integral with a length scale") {
  // int_0^inf 2 pi lambda r exp(-pi lambda r^2) dr = 1
  const double lambda = 1e-6;
  auto f = [&](double r) {
    return 2.0 * std::numbers::pi * lambda * r * std::exp(-std::numbers::pi * lambda * r * r);
  };
  const double v = integrate_semi_infinite(f, 0.0, {}, nearest_neighbor_scale(lambda));
  CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("all-zero integrand returns zero at the ceiling") {
  CHECK(integrate_semi_infinite([](double) { return 0.0; }, 0.0) == 0.0);
}

TEST_CASE("divergent tail raises NonConvergence") {
  CHECK_THROWS_AS(integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x); }, 0.0),
                  NonConvergence);
}

TEST_CASE("subdivision budget is enforced") {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 1;
  // A narrow spike cannot be resolved in one panel.
  auto spike = [](double x) { return 1.0 / (1e-6 + (x - 0.3) * (x - 0.3)); };
  CHECK_THROWS_AS(integrate_finite(spike, 0.0, 1.0, cfg), NonConvergence);
}

TEST_CASE("kronrod rule is exact for polynomials of moderate degree") {
  // int_0^1 x^20 dx
  const auto est = integrate_adaptive([](double x) { return std::pow(x, 20); }, 0.0, 1.0, {});
  CHECK(est.value == doctest::Approx(1.0 / 21.0).epsilon(1e-14));
  CHECK(est.subdivisions == 1);
}

TEST_CASE("integrable endpoint singularity") {
  // int_0^1 x^-1/2 dx = 2
  const double v = integrate_finite([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("configuration validation") {
  QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_subdivisions = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("nearest-neighbor scale") {
  CHECK(nearest_neighbor_scale(1.0 / std::numbers::pi) == doctest::Approx(1.0));
  CHECK(nearest_neighbor_scale(0.0) == 1.0);
}
