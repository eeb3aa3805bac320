#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hetnet/config.hpp"
#include "hetnet/sweep.hpp"

namespace hetnet {

/// Shortest text that reads back to the same double; "nan" for NaN.
std::string format_number(double v);

/// Columns: sweep_value, tau_db, engine, pc_total, pc_tier_<k>...,
/// assoc_tier_<k>..., mc_ci_halfwidth, wall_ms.
void write_csv(const SweepResult& result, std::size_t tiers, std::ostream& out);

/// Rows as in the CSV plus the configuration echo and run metadata.
nlohmann::json report_json(const RunConfig& cfg, const SweepResult& result);

/// Coverage against the sweep axis: analytic values as a line, Monte Carlo
/// estimates as points with 95% error bars.
void write_svg(const RunConfig& cfg, const SweepResult& result, std::ostream& out);

}  // namespace hetnet
