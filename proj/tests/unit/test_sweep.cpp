#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hetnet/config.hpp"
#include "hetnet/report.hpp"
#include "hetnet/sweep.hpp"

using namespace hetnet;

namespace {

std::string two_tier(const std::string& sweep, const std::string& engines,
                     const std::string& extra = "") {
  return R"({
    "network": {
      "tiers": [
        {"kind": "cluster", "parent_density": 1e-4, "mbar": 10,
         "kernel": {"type": "gaussian", "sigma": 20}, "power": 1},
        {"kind": "ppp", "density": 1e-6, "power": 1000}
      ]
    },
    "sweep": )" +
         sweep + R"(,
    "engines": ")" +
         engines + R"(",
    "mc": {"trials": 2000, "seed": 3, "window": {"sim_radius": 1500}})" +
         extra + "}";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string csv_of(const RunConfig& cfg, const SweepResult& r) {
  std::ostringstream os;
  write_csv(r, cfg.network.size(), os);
  return os.str();
}

}  // namespace

TEST_CASE("analytic threshold sweep") {
  const RunConfig cfg =
      parse_config(two_tier(R"({"tau_db": [-10, -8, -6, -4, -2, 0, 2, 4, 6, 8, 10]})",
                            "analytic"));
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.rows.size() == 11);
  CHECK_FALSE(r.any_failed());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const SweepRow& row = r.rows[i];
    CHECK(row.engine == Engines::Analytic);
    CHECK(row.tau_db == row.sweep_value);
    CHECK_FALSE(row.mc_ci_halfwidth.has_value());
    CHECK(row.wall_ms.has_value());
    CHECK(row.assoc_tier[0] + row.assoc_tier[1] == doctest::Approx(1.0).epsilon(1e-5));
    if (i > 0) CHECK(row.pc_total <= r.rows[i - 1].pc_total);
  }
  CHECK(r.rows[5].pc_total == doctest::Approx(0.388).epsilon(0.003));
}

TEST_CASE("both engines agree on a short run") {
  const RunConfig cfg = parse_config(two_tier(R"({"tau_db": [-5, 0, 5]})", "both"));
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.rows.size() == 6);
  for (std::size_t i = 0; i < r.rows.size(); i += 2) {
    const SweepRow& a = r.rows[i];
    const SweepRow& m = r.rows[i + 1];
    CHECK(a.engine == Engines::Analytic);
    CHECK(m.engine == Engines::MonteCarlo);
    CHECK(a.sweep_value == m.sweep_value);
    REQUIRE(m.mc_ci_halfwidth.has_value());
    CHECK(m.mc_trials == 2000);
    CHECK(m.sim_radius == 1500.0);
    CHECK(std::abs(a.pc_total - m.pc_total) <= *m.mc_ci_halfwidth + 0.01);
  }
}

TEST_CASE("cluster-size sweep with Monte Carlo per point") {
  const RunConfig cfg = parse_config(two_tier(R"({"sigma_m": [10, 80], "tau_db": 0})", "mc"));
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].sweep_value == 10.0);
  CHECK(r.rows[0].tau_db == 0.0);
  CHECK(r.rows[0].pc_total < r.rows[1].pc_total);
}

TEST_CASE("CSV layout") {
  const RunConfig cfg = parse_config(two_tier(R"({"tau_db": [0, 5]})", "both"));
  const std::string csv = csv_of(cfg, run_sweep(cfg, {.timing = false}));
  std::istringstream is(csv);
  std::string header, line;
  std::getline(is, header);
  CHECK(header ==
        "sweep_value,tau_db,engine,pc_total,pc_tier_1,pc_tier_2,assoc_tier_1,assoc_tier_2,"
        "mc_ci_halfwidth,wall_ms");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) rows.push_back(split(line));
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) REQUIRE(row.size() == 10);
  CHECK(rows[0][2] == "analytic");
  CHECK(rows[1][2] == "mc");
  CHECK(rows[0][8].empty());
  CHECK_FALSE(rows[1][8].empty());
  CHECK(rows[0][9].empty());
}

TEST_CASE("untimed output is reproducible byte for byte") {
  const RunConfig cfg = parse_config(two_tier(R"({"tau_db": [0, 5]})", "both"));
  CHECK(csv_of(cfg, run_sweep(cfg, {.timing = false})) ==
        csv_of(cfg, run_sweep(cfg, {.timing = false})));
}

TEST_CASE("numbers round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 0.5600991535115574, 1e-300, -2.5e17, 0.0}) {
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(0.25) == "0.25");
}

TEST_CASE("failed cells are reported without stopping the sweep") {
  const RunConfig cfg =
      parse_config(two_tier(R"({"tau_db": [0, 5]})", "analytic",
                            R"(, "analytic": {"max_subdivisions": 1})"));
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.any_failed());
  CHECK(r.rows[0].failed());
  CHECK(std::isnan(r.rows[0].pc_total));
  CHECK_FALSE(r.rows[0].error.empty());

  const auto doc = report_json(cfg, r);
  CHECK(doc["metadata"]["failed_cells"] == 2);
  CHECK(doc["rows"][0]["pc_total"].is_null());
}

TEST_CASE("JSON report mirrors the rows") {
  const RunConfig cfg = parse_config(two_tier(R"({"tau_db": [0]})", "both"));
  const SweepResult r = run_sweep(cfg);
  const auto doc = report_json(cfg, r);
  CHECK(doc["config"] == cfg.document);
  CHECK(doc["metadata"]["sweep_axis"] == "tau_db");
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][1]["engine"] == "mc");
  CHECK(doc["rows"][1]["pc_total"].get<double>() == r.rows[1].pc_total);
  CHECK(doc["rows"][0]["mc_ci_halfwidth"].is_null());

  std::ostringstream svg;
  write_svg(cfg, r, svg);
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("</svg>") != std::string::npos);
}
