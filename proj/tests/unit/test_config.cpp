#include <doctest.h>

#include <cmath>
#include <string>

#include "hetnet/config.hpp"
#include "hetnet/errors.hpp"

using namespace hetnet;

namespace {

const char* kMinimal = R"({
  "network": {"tiers": [{"kind": "ppp", "density": 1e-5, "power": 1}]},
  "sweep": {"tau_db": [0, 3]}
})";

const char* kTwoTier = R"({
  // comments are allowed
  "network": {
    "alpha": 4,
    "tiers": [
      {"kind": "cluster", "parent_density": 1e-4, "mbar": 10,
       "kernel": {"type": "gaussian", "sigma": 20}, "power": 1},
      {"kind": "ppp", "density": 1e-6, "power": 1000}
    ],
    "user": {"type": 2, "q": 1}
  },
  "sweep": {"sigma_m": [10, 40], "tau_db": 3},
  "engines": "analytic",
  "mc": {"trials": 500, "seed": 9, "window": {"sim_radius": 1200}}
})";

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("minimal configuration takes the defaults") {
  const RunConfig cfg = parse_config(kMinimal);
  CHECK(cfg.network.alpha == 4.0);
  CHECK(cfg.network.noise == 0.0);
  CHECK(cfg.network.user.type == UserType::Type1);
  CHECK(cfg.engines == Engines::Both);
  CHECK(cfg.sweep.axis == SweepAxis::TauDb);
  CHECK(cfg.sweep.values == std::vector<double>{0.0, 3.0});
  CHECK(cfg.sweep.tau_at(1) == doctest::Approx(std::pow(10.0, 0.3)));
  CHECK(cfg.mc.trials == 100000);
  CHECK_FALSE(cfg.mc.sim_radius.has_value());
  CHECK(cfg.output.csv == "coverage.csv");
}

TEST_CASE("cluster-size sweep applies the swept length") {
  const RunConfig cfg = parse_config(kTwoTier);
  CHECK(cfg.sweep.axis == SweepAxis::SigmaM);
  CHECK(cfg.sweep.tau_db_at(0) == 3.0);
  CHECK(cfg.network.user.type == UserType::Type2);
  CHECK(cfg.network.user.q == 0);
  CHECK(cfg.network_at(1).tiers[0].kernel.sigma() == 40.0);
  CHECK(cfg.network_at(1).tiers[0].kernel.is_gaussian());
  CHECK(cfg.mc.trials == 500);
  CHECK(cfg.mc.seed == 9);
  CHECK(cfg.window_for(cfg.network_at(0)).sim_radius == 1200.0);
  CHECK(cfg.document.contains("network"));
}

TEST_CASE("density-ratio sweep scales parents against the reference tier") {
  std::string text = kTwoTier;
  text.replace(text.find(R"("sigma_m": [10, 40])"), 19, R"("parent_density_ratio": [1, 10])");
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.sweep.axis == SweepAxis::ParentDensityRatio);
  CHECK(cfg.sweep.reference_tier == 1);
  CHECK(cfg.network_at(1).tiers[0].parent_lambda == doctest::Approx(1e-5));
}

TEST_CASE("errors name the offending field") {
  std::string bad_alpha = kTwoTier;
  bad_alpha.replace(bad_alpha.find(R"("alpha": 4)"), 10, R"("alpha": 1.5)");
  CHECK(field_of(bad_alpha) == "network.alpha");

  std::string bad_q = kTwoTier;
  bad_q.replace(bad_q.find(R"("q": 1)"), 6, R"("q": 2)");
  CHECK(field_of(bad_q).rfind("network.user", 0) == 0);

  CHECK(field_of(R"({"network": {"tiers": [{"kind": "ppp", "density": 1e-5, "power": 1}]},
                     "sweep": {"tau_db": []}})")
            .rfind("sweep", 0) == 0);
  CHECK(field_of(R"({"network": {"tiers": [{"kind": "ppp", "density": 1e-5, "power": 1}]},
                     "sweep": {"tau_db": [0]}, "colour": "red"})") == "colour");
  CHECK(field_of(R"({"network": {"tiers": [{"kind": "ppp", "density": 1e-5, "power": 1}]},
                     "sweep": {"tau_db": [0], "sigma_m": [10]}})")
            .rfind("sweep", 0) == 0);
  CHECK(field_of(R"({"network": {"tiers": [{"kind": "ppp", "density": -1, "power": 1}]},
                     "sweep": {"tau_db": [0]}})")
            .rfind("network.tiers[0]", 0) == 0);
  // A cluster-size sweep needs a cluster tier.
  CHECK(field_of(R"({"network": {"tiers": [{"kind": "ppp", "density": 1e-5, "power": 1}]},
                     "sweep": {"sigma_m": [10]}})")
            .rfind("sweep", 0) == 0);
  CHECK(field_of("{ not json") != "<no error>");
}

TEST_CASE("engine names") {
  CHECK(parse_engines("analytic") == Engines::Analytic);
  CHECK(parse_engines("mc") == Engines::MonteCarlo);
  CHECK(parse_engines("both") == Engines::Both);
  CHECK_THROWS_AS(parse_engines("quantum"), ConfigError);
  CHECK(engines_name(Engines::MonteCarlo) == "mc");
  CHECK(axis_name(SweepAxis::SigmaM) == "sigma_m");
}

TEST_CASE("missing configuration file") {
  try {
    parse_config_file("/nonexistent/config.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "--config");
  }
}
