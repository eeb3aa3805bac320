#include "hetnet/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace hetnet {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json list(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

std::string engine_label(Engines e) { return e == Engines::Analytic ? "analytic" : "mc"; }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double unit(double v) const {
    const double a = log ? std::log10(v) : v;
    const double l = log ? std::log10(lo) : lo;
    const double h = log ? std::log10(hi) : hi;
    return h > l ? (a - l) / (h - l) : 0.5;
  }
};

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (double d = std::floor(std::log10(lo)); d <= std::ceil(std::log10(hi)); d += 1.0) {
    const double t = std::pow(10.0, d);
    if (t >= lo * (1 - 1e-9) && t <= hi * (1 + 1e-9)) ticks.push_back(t);
  }
  return ticks;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(const SweepResult& result, std::size_t tiers, std::ostream& out) {
  out << "sweep_value,tau_db,engine,pc_total";
  for (std::size_t k = 1; k <= tiers; ++k) out << ",pc_tier_" << k;
  for (std::size_t k = 1; k <= tiers; ++k) out << ",assoc_tier_" << k;
  out << ",mc_ci_halfwidth,wall_ms\n";
  for (const SweepRow& r : result.rows) {
    out << format_number(r.sweep_value) << ',' << format_number(r.tau_db) << ','
        << engine_label(r.engine) << ',' << format_number(r.pc_total);
    for (std::size_t k = 0; k < tiers; ++k) {
      out << ',' << format_number(k < r.pc_tier.size() ? r.pc_tier[k] : NAN);
    }
    for (std::size_t k = 0; k < tiers; ++k) {
      out << ',' << format_number(k < r.assoc_tier.size() ? r.assoc_tier[k] : NAN);
    }
    out << ',';
    if (r.mc_ci_halfwidth) out << format_number(*r.mc_ci_halfwidth);
    out << ',';
    if (r.wall_ms) out << format_number(*r.wall_ms);
    out << '\n';
  }
}

json report_json(const RunConfig& cfg, const SweepResult& result) {
  json rows = json::array();
  for (const SweepRow& r : result.rows) {
    json row = {
        {"sweep_value", r.sweep_value},
        {"tau_db", r.tau_db},
        {"engine", engine_label(r.engine)},
        {"pc_total", number_or_null(r.pc_total)},
        {"pc_tier", list(r.pc_tier)},
        {"assoc_tier", list(r.assoc_tier)},
        {"mc_ci_halfwidth", r.mc_ci_halfwidth ? json(*r.mc_ci_halfwidth) : json(nullptr)},
        {"wall_ms", r.wall_ms ? json(*r.wall_ms) : json(nullptr)},
        {"error", r.failed() ? json(r.error) : json(nullptr)},
    };
    if (r.engine == Engines::MonteCarlo) {
      row["mc_trials"] = r.mc_trials;
      row["empty_scene_resamples"] = r.empty_scene_resamples;
      row["sim_radius_m"] = r.sim_radius ? json(*r.sim_radius) : json(nullptr);
      row["window_delta"] = r.window_delta ? json(*r.window_delta) : json(nullptr);
    }
    rows.push_back(std::move(row));
  }
  json meta = {
      {"tool", "hetnet-coverage"},
      {"version", "0.1.0"},
      {"sweep_axis", std::string(axis_name(cfg.sweep.axis))},
      {"engines", std::string(engines_name(cfg.engines))},
      {"tiers", cfg.network.size()},
      {"mc_trials", cfg.mc.trials},
      {"mc_seed", cfg.mc.seed},
      {"rel_tol", cfg.quad.rel_tol},
      {"failed_cells",
       std::count_if(result.rows.begin(), result.rows.end(),
                     [](const SweepRow& r) { return r.failed(); })},
      {"wall_ms", result.wall_ms ? json(*result.wall_ms) : json(nullptr)},
  };
  return {{"config", cfg.document}, {"metadata", meta}, {"rows", rows}};
}

void write_svg(const RunConfig& cfg, const SweepResult& result, std::ostream& out) {
  constexpr double width = 720, height = 480;
  constexpr double left = 70, right = 30, top = 40, bottom = 60;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  std::vector<double> xs;
  for (const auto& r : result.rows) xs.push_back(r.sweep_value);
  Axis xa;
  xa.lo = *std::min_element(xs.begin(), xs.end());
  xa.hi = *std::max_element(xs.begin(), xs.end());
  xa.log = cfg.sweep.axis != SweepAxis::TauDb && xa.lo > 0.0 && xa.hi / xa.lo >= 10.0;
  if (!(xa.hi > xa.lo)) {
    xa.lo -= xa.log ? xa.lo / 2 : 1.0;
    xa.hi += xa.log ? xa.hi : 1.0;
  }
  const Axis ya{0.0, 1.0, false};
  auto px = [&](double v) { return left + pw * xa.unit(v); };
  auto py = [&](double v) { return top + ph * (1.0 - ya.unit(std::clamp(v, 0.0, 1.0))); };

  std::string xlabel = "SINR threshold (dB)";
  if (cfg.sweep.axis == SweepAxis::SigmaM) xlabel = "cluster size (m)";
  if (cfg.sweep.axis == SweepAxis::ParentDensityRatio) xlabel = "parent density ratio";

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << "Coverage probability</text>\n";

  // Grid and ticks.
  for (double t : linear_ticks(0.0, 1.0)) {
    const double y = py(t);
    out << "<line x1=\"" << left << "\" y1=\"" << fixed(y, 2) << "\" x2=\"" << left + pw
        << "\" y2=\"" << fixed(y, 2) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << fixed(y + 4, 2)
        << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  for (double t : xa.log ? log_ticks(xa.lo, xa.hi) : linear_ticks(xa.lo, xa.hi)) {
    const double x = px(t);
    out << "<line x1=\"" << fixed(x, 2) << "\" y1=\"" << top << "\" x2=\"" << fixed(x, 2)
        << "\" y2=\"" << top + ph << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fixed(x, 2) << "\" y=\"" << top + ph + 18
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\""
      << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">" << escape_xml(xlabel) << "</text>\n";
  out << "<text transform=\"translate(18," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">coverage probability</text>\n";

  // Analytic curve.
  std::string path;
  for (const auto& r : result.rows) {
    if (r.engine != Engines::Analytic || !std::isfinite(r.pc_total)) continue;
    path += (path.empty() ? "M" : " L") + fixed(px(r.sweep_value), 2) + "," +
            fixed(py(r.pc_total), 2);
  }
  if (!path.empty()) {
    out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  }
  // Monte Carlo points with error bars.
  for (const auto& r : result.rows) {
    if (r.engine != Engines::MonteCarlo || !std::isfinite(r.pc_total)) continue;
    const double x = px(r.sweep_value);
    const double ci = r.mc_ci_halfwidth.value_or(0.0);
    out << "<line x1=\"" << fixed(x, 2) << "\" y1=\"" << fixed(py(r.pc_total - ci), 2)
        << "\" x2=\"" << fixed(x, 2) << "\" y2=\"" << fixed(py(r.pc_total + ci), 2)
        << "\" stroke=\"#d62728\"/>\n";
    out << "<circle cx=\"" << fixed(x, 2) << "\" cy=\"" << fixed(py(r.pc_total), 2)
        << "\" r=\"3.5\" fill=\"none\" stroke=\"#d62728\"/>\n";
  }
  // Legend.
  const double lx = left + pw - 150, ly = top + 15;
  out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 25 << "\" y2=\"" << ly
      << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  out << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 4 << "\">analytic</text>\n";
  out << "<circle cx=\"" << lx + 12.5 << "\" cy=\"" << ly + 20
      << "\" r=\"3.5\" fill=\"none\" stroke=\"#d62728\"/>\n";
  out << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 24 << "\">Monte Carlo (95% CI)</text>\n";
  out << "</svg>\n";
}

}  // namespace hetnet
