#pragma once

// Run configuration for the hetnet-coverage tool. The document format is
// described in docs/config.md.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hetnet/network.hpp"
#include "hetnet/pointprocess.hpp"
#include "hetnet/quadrature.hpp"

namespace hetnet {

enum class Engines { Analytic, MonteCarlo, Both };
enum class SweepAxis { TauDb, SigmaM, ParentDensityRatio };

struct SweepSpec {
  SweepAxis axis = SweepAxis::TauDb;
  std::vector<double> values;   // as written; dB for the threshold axis
  std::vector<double> taus;     // linear thresholds, one per value (TauDb axis)
  double tau_db = 0.0;          // fixed threshold for the other axes
  double tau = 1.0;             // linear form of tau_db
  std::size_t tier = 0;         // swept cluster tier (0-based)
  std::size_t reference_tier = 0;  // denominator tier of the density ratio

  /// Threshold in dB and in linear scale at sweep point `i`.
  double tau_db_at(std::size_t i) const;
  double tau_at(std::size_t i) const;
};

struct McSettings {
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::optional<double> sim_radius;  // unset: derived from the network
  double parent_margin_sigmas = 6.0;
  bool convergence_check = false;
};

struct OutputSettings {
  std::string csv = "coverage.csv";
  std::string json = "coverage.json";
  std::string svg = "coverage.svg";
};

struct RunConfig {
  NetworkModel network;
  SweepSpec sweep;
  Engines engines = Engines::Both;
  QuadratureConfig quad;
  double z_truncation = kDefaultTruncation;
  unsigned workers = 1;  // sweep points evaluated concurrently
  McSettings mc;
  OutputSettings output;
  nlohmann::json document;  // the input, echoed into the JSON report

  /// Network at sweep point `i`, with the swept parameter applied.
  NetworkModel network_at(std::size_t i) const;
  /// Window used by the Monte Carlo engine for network `net`.
  WindowPolicy window_for(const NetworkModel& net) const;
};

/// Parses and validates a JSON document. Throws ConfigError naming the
/// offending field.
RunConfig parse_config(std::string_view text);
RunConfig parse_config_file(const std::filesystem::path& path);

Engines parse_engines(std::string_view name);
std::string_view engines_name(Engines e);
std::string_view axis_name(SweepAxis a);

}  // namespace hetnet
