// hetnet-coverage run --config <path> [--engines analytic|mc|both] [--trials N]
//                     [--seed S] [--out-dir D]
//
// Exit status: 0 success, 2 configuration error, 3 some sweep cell failed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hetnet/config.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/report.hpp"
#include "hetnet/sweep.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCellFailed = 3;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Downlink coverage of clustered heterogeneous cellular networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string engines;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  unsigned workers = 0;
  bool no_timing = false;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Evaluate a sweep and write CSV, JSON and SVG reports");
  run->add_option("--config", config_path, "JSON run configuration")->required();
  run->add_option("--engines", engines, "analytic, mc or both")
      ->check(CLI::IsMember({"analytic", "mc", "both"}));
  auto* trials_opt = run->add_option("--trials", trials, "Monte Carlo trials per sweep point")
                         ->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Monte Carlo seed");
  run->add_option("--out-dir", out_dir, "Directory for the report files");
  auto* workers_opt = run->add_option("--workers", workers, "Sweep points evaluated concurrently");
  run->add_flag("--no-timing", no_timing, "Leave wall_ms empty so reruns are byte-identical");
  run->add_flag("-q,--quiet", quiet, "Do not print the report paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  hetnet::RunConfig cfg;
  try {
    cfg = hetnet::parse_config_file(config_path);
    if (!engines.empty()) cfg.engines = hetnet::parse_engines(engines);
    if (*trials_opt) cfg.mc.trials = trials;
    if (*seed_opt) cfg.mc.seed = seed;
    if (*workers_opt) cfg.workers = workers;
  } catch (const hetnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const hetnet::SweepResult result = hetnet::run_sweep(cfg, {.timing = !no_timing});

  try {
    const fs::path dir(out_dir);
    std::ostringstream csv, svg;
    hetnet::write_csv(result, cfg.network.size(), csv);
    hetnet::write_svg(cfg, result, svg);
    write_file(dir / cfg.output.csv, csv.str());
    write_file(dir / cfg.output.json, hetnet::report_json(cfg, result).dump(2) + "\n");
    write_file(dir / cfg.output.svg, svg.str());
    if (!quiet) {
      std::cout << (dir / cfg.output.csv).string() << '\n'
                << (dir / cfg.output.json).string() << '\n'
                << (dir / cfg.output.svg).string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  for (const auto& row : result.rows) {
    if (row.failed()) {
      std::cerr << "cell failed: " << row.sweep_value << " ("
                << hetnet::engines_name(row.engine) << "): " << row.error << '\n';
    }
  }
  return result.any_failed() ? kExitCellFailed : 0;
}
