#include "hetnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

using nlohmann::json;

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected an object", path.empty() ? "<root>" : path);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  require_object(j, path);
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError("unknown key", join(path, item.key()));
    }
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError("expected a number", path);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("must be finite", path);
  return v;
}

double number_or(const json& obj, std::string_view key, const std::string& path, double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, join(path, key));
}

double required_number(const json& obj, std::string_view key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("required", join(path, key));
  return number(*it, join(path, key));
}

std::uint64_t unsigned_or(const json& obj, std::string_view key, const std::string& path,
                          std::uint64_t fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned()) {
    throw ConfigError("expected a non-negative integer", join(path, key));
  }
  return it->get<std::uint64_t>();
}

bool bool_or(const json& obj, std::string_view key, const std::string& path, bool fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError("expected true or false", join(path, key));
  return it->get<bool>();
}

std::string string_or(const json& obj, std::string_view key, const std::string& path,
                      std::string fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw ConfigError("expected a string", join(path, key));
  return it->get<std::string>();
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError("expected a list of numbers", path);
  if (j.empty()) throw ConfigError("sweep list must not be empty", path);
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index(path, i)));
  return out;
}

// 1-based tier reference in the document, 0-based internally.
std::size_t tier_index(const json& obj, std::string_view key, const std::string& path,
                       std::size_t tiers) {
  const std::string where = join(path, key);
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("expected a tier number", where);
  const long long k = v.get<long long>();
  if (k < 1 || static_cast<std::size_t>(k) > tiers) {
    throw ConfigError("tier numbers run from 1 to " + std::to_string(tiers), where);
  }
  return static_cast<std::size_t>(k - 1);
}

OffspringKernel parse_kernel(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string type = string_or(j, "type", path, "gaussian");
  try {
    if (type == "gaussian") {
      check_keys(j, path, {"type", "sigma"});
      return OffspringKernel::gaussian(required_number(j, "sigma", path));
    }
    if (type == "uniform_disc") {
      check_keys(j, path, {"type", "radius"});
      return OffspringKernel::uniform_disc(required_number(j, "radius", path));
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), path);
  }
  throw ConfigError("kernel type must be \"gaussian\" or \"uniform_disc\"", join(path, "type"));
}

TierSpec parse_tier(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string kind = string_or(j, "kind", path, "ppp");
  if (kind == "ppp") {
    check_keys(j, path, {"kind", "density", "power"});
    return TierSpec::poisson(required_number(j, "density", path),
                             required_number(j, "power", path));
  }
  if (kind == "cluster") {
    check_keys(j, path, {"kind", "parent_density", "mbar", "kernel", "power"});
    if (!j.contains("kernel")) throw ConfigError("required", join(path, "kernel"));
    return TierSpec::cluster(required_number(j, "parent_density", path),
                             required_number(j, "mbar", path),
                             parse_kernel(j.at("kernel"), join(path, "kernel")),
                             required_number(j, "power", path));
  }
  throw ConfigError("tier kind must be \"ppp\" or \"cluster\"", join(path, "kind"));
}

NetworkModel parse_network(const json& j) {
  const std::string path = "network";
  check_keys(j, path, {"alpha", "noise", "tiers", "user"});
  NetworkModel net;
  net.alpha = number_or(j, "alpha", path, 4.0);
  net.noise = number_or(j, "noise", path, 0.0);
  if (!j.contains("tiers")) throw ConfigError("required", "network.tiers");
  const json& tiers = j.at("tiers");
  if (!tiers.is_array() || tiers.empty()) {
    throw ConfigError("expected a non-empty list of tiers", "network.tiers");
  }
  for (std::size_t k = 0; k < tiers.size(); ++k) {
    net.tiers.push_back(parse_tier(tiers[k], index("network.tiers", k)));
  }
  if (j.contains("user")) {
    const std::string upath = "network.user";
    const json& u = j.at("user");
    check_keys(u, upath, {"type", "q", "kernel"});
    const auto type = unsigned_or(u, "type", upath, 1);
    if (type == 2) {
      if (!u.contains("q")) throw ConfigError("required for Type 2 users", "network.user.q");
      const std::size_t q = tier_index(u, "q", upath, net.size());
      std::optional<OffspringKernel> kernel;
      if (u.contains("kernel")) kernel = parse_kernel(u.at("kernel"), "network.user.kernel");
      net.user = UserModel::type2(q, kernel);
    } else if (type == 1) {
      if (u.contains("q") || u.contains("kernel")) {
        throw ConfigError("Type 1 users take no cluster coupling", upath);
      }
    } else {
      throw ConfigError("user type must be 1 or 2", "network.user.type");
    }
  }
  net.validate();
  return net;
}

std::optional<std::size_t> first_tier(const NetworkModel& net, bool cluster) {
  for (std::size_t k = 0; k < net.size(); ++k) {
    if (net.tiers[k].is_cluster() == cluster) return k;
  }
  return std::nullopt;
}

SweepSpec parse_sweep(const json& j, const NetworkModel& net) {
  const std::string path = "sweep";
  check_keys(j, path, {"tau_db", "sigma_m", "parent_density_ratio", "tier", "reference_tier"});
  SweepSpec s;
  int axes = 0;
  if (j.contains("tau_db") && j.at("tau_db").is_array()) {
    s.axis = SweepAxis::TauDb;
    s.values = number_list(j.at("tau_db"), "sweep.tau_db");
    ++axes;
  } else {
    s.tau_db = number_or(j, "tau_db", path, 0.0);
  }
  if (j.contains("sigma_m")) {
    s.axis = SweepAxis::SigmaM;
    s.values = number_list(j.at("sigma_m"), "sweep.sigma_m");
    ++axes;
  }
  if (j.contains("parent_density_ratio")) {
    s.axis = SweepAxis::ParentDensityRatio;
    s.values = number_list(j.at("parent_density_ratio"), "sweep.parent_density_ratio");
    ++axes;
  }
  if (axes != 1) {
    throw ConfigError(
        "exactly one of tau_db (list), sigma_m or parent_density_ratio is required", path);
  }
  s.tau = db_to_linear(s.tau_db);
  if (s.axis == SweepAxis::TauDb) {
    if (j.contains("tier") || j.contains("reference_tier")) {
      throw ConfigError("tier selection applies to sigma_m and parent_density_ratio sweeps",
                        path);
    }
    for (double db : s.values) s.taus.push_back(db_to_linear(db));
    return s;
  }

  const auto cluster = first_tier(net, true);
  if (j.contains("tier")) {
    s.tier = tier_index(j, "tier", path, net.size());
  } else if (cluster) {
    s.tier = *cluster;
  } else {
    throw ConfigError("the network has no cluster tier to sweep", "sweep.tier");
  }
  if (!net.tiers[s.tier].is_cluster()) {
    throw ConfigError("swept tier must be a cluster tier", "sweep.tier");
  }
  const std::string vpath =
      s.axis == SweepAxis::SigmaM ? "sweep.sigma_m" : "sweep.parent_density_ratio";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (!(s.values[i] > 0.0)) throw ConfigError("must be > 0", index(vpath, i));
  }
  if (s.axis == SweepAxis::ParentDensityRatio) {
    const auto ppp = first_tier(net, false);
    if (j.contains("reference_tier")) {
      s.reference_tier = tier_index(j, "reference_tier", path, net.size());
    } else if (ppp) {
      s.reference_tier = *ppp;
    } else {
      throw ConfigError("the network has no PPP tier to use as reference",
                        "sweep.reference_tier");
    }
    if (s.reference_tier == s.tier) {
      throw ConfigError("reference tier must differ from the swept tier", "sweep.reference_tier");
    }
    if (!(net.tiers[s.reference_tier].mean_intensity() > 0.0)) {
      throw ConfigError("reference tier must have positive intensity", "sweep.reference_tier");
    }
  } else if (j.contains("reference_tier")) {
    throw ConfigError("only parent_density_ratio sweeps take a reference tier",
                      "sweep.reference_tier");
  }
  return s;
}

void parse_analytic(const json& j, RunConfig& cfg) {
  const std::string path = "analytic";
  check_keys(j, path, {"rel_tol", "abs_tol", "max_subdivisions", "tail_cutoff_epsilon",
                       "z_truncation"});
  cfg.quad.rel_tol = number_or(j, "rel_tol", path, cfg.quad.rel_tol);
  cfg.quad.abs_tol = number_or(j, "abs_tol", path, cfg.quad.abs_tol);
  cfg.quad.max_subdivisions = static_cast<std::size_t>(
      unsigned_or(j, "max_subdivisions", path, cfg.quad.max_subdivisions));
  cfg.quad.tail_cutoff_epsilon =
      number_or(j, "tail_cutoff_epsilon", path, cfg.quad.tail_cutoff_epsilon);
  cfg.z_truncation = number_or(j, "z_truncation", path, cfg.z_truncation);
  try {
    cfg.quad.validate();
  } catch (const ConfigError& e) {
    const std::string& f = e.field();
    throw ConfigError(e.reason(), join(path, f.substr(f.find('.') + 1)));
  }
  if (!(cfg.z_truncation > 0.0)) throw ConfigError("must be > 0", "analytic.z_truncation");
}

void parse_mc(const json& j, McSettings& mc) {
  const std::string path = "mc";
  check_keys(j, path, {"trials", "seed", "workers", "window"});
  mc.trials = static_cast<std::size_t>(unsigned_or(j, "trials", path, mc.trials));
  if (mc.trials == 0) throw ConfigError("must be >= 1", "mc.trials");
  mc.seed = unsigned_or(j, "seed", path, mc.seed);
  mc.workers = static_cast<unsigned>(unsigned_or(j, "workers", path, mc.workers));
  if (j.contains("window")) {
    const std::string wpath = "mc.window";
    const json& w = j.at("window");
    check_keys(w, wpath, {"sim_radius", "parent_margin_sigmas", "convergence_check"});
    if (w.contains("sim_radius") && !(w.at("sim_radius").is_string() &&
                                      w.at("sim_radius").get<std::string>() == "auto")) {
      mc.sim_radius = number(w.at("sim_radius"), "mc.window.sim_radius");
      if (!(*mc.sim_radius > 0.0)) throw ConfigError("must be > 0", "mc.window.sim_radius");
    }
    mc.parent_margin_sigmas = number_or(w, "parent_margin_sigmas", wpath, mc.parent_margin_sigmas);
    if (!(mc.parent_margin_sigmas >= 0.0)) {
      throw ConfigError("must be >= 0", "mc.window.parent_margin_sigmas");
    }
    mc.convergence_check = bool_or(w, "convergence_check", wpath, mc.convergence_check);
  }
}

void parse_output(const json& j, OutputSettings& out) {
  const std::string path = "output";
  check_keys(j, path, {"csv", "json", "svg"});
  out.csv = string_or(j, "csv", path, out.csv);
  out.json = string_or(j, "json", path, out.json);
  out.svg = string_or(j, "svg", path, out.svg);
}

}  // namespace

double SweepSpec::tau_db_at(std::size_t i) const {
  return axis == SweepAxis::TauDb ? values.at(i) : tau_db;
}

double SweepSpec::tau_at(std::size_t i) const {
  return axis == SweepAxis::TauDb ? taus.at(i) : tau;
}

NetworkModel RunConfig::network_at(std::size_t i) const {
  NetworkModel net = network;
  const double v = sweep.values.at(i);
  switch (sweep.axis) {
    case SweepAxis::TauDb:
      break;
    case SweepAxis::SigmaM: {
      auto& t = net.tiers[sweep.tier];
      t.kernel = t.kernel.is_gaussian() ? OffspringKernel::gaussian(v)
                                        : OffspringKernel::uniform_disc(v);
      break;
    }
    case SweepAxis::ParentDensityRatio:
      net.tiers[sweep.tier].parent_lambda =
          v * network.tiers[sweep.reference_tier].mean_intensity();
      break;
  }
  return net;
}

WindowPolicy RunConfig::window_for(const NetworkModel& net) const {
  double tau_max = sweep.tau;
  if (sweep.axis == SweepAxis::TauDb) {
    tau_max = *std::max_element(sweep.taus.begin(), sweep.taus.end());
  }
  WindowPolicy w = default_window(net, tau_max);
  if (mc.sim_radius) w.sim_radius = *mc.sim_radius;
  w.parent_margin_sigmas = mc.parent_margin_sigmas;
  w.convergence_check = mc.convergence_check;
  return w;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed document: ") + e.what(), "<root>");
  }
  check_keys(doc, "", {"network", "sweep", "engines", "analytic", "mc", "output", "workers"});
  if (!doc.contains("network")) throw ConfigError("required", "network");
  if (!doc.contains("sweep")) throw ConfigError("required", "sweep");

  RunConfig cfg;
  cfg.document = doc;
  cfg.network = parse_network(doc.at("network"));
  cfg.sweep = parse_sweep(doc.at("sweep"), cfg.network);
  if (doc.contains("engines")) {
    if (!doc.at("engines").is_string()) throw ConfigError("expected a string", "engines");
    cfg.engines = parse_engines(doc.at("engines").get<std::string>());
  }
  cfg.workers = static_cast<unsigned>(unsigned_or(doc, "workers", "", cfg.workers));
  if (doc.contains("analytic")) parse_analytic(doc.at("analytic"), cfg);
  if (doc.contains("mc")) parse_mc(doc.at("mc"), cfg.mc);
  if (doc.contains("output")) parse_output(doc.at("output"), cfg.output);

  // Every sweep point must describe a valid network.
  for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
    try {
      cfg.network_at(i).validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid network at this point (") + e.what() + ")",
                        index("sweep." + std::string(axis_name(cfg.sweep.axis)), i));
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string(), "--config");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Engines parse_engines(std::string_view name) {
  if (name == "analytic") return Engines::Analytic;
  if (name == "mc" || name == "montecarlo") return Engines::MonteCarlo;
  if (name == "both") return Engines::Both;
  throw ConfigError("expected analytic, mc or both", "engines");
}

std::string_view engines_name(Engines e) {
  switch (e) {
    case Engines::Analytic: return "analytic";
    case Engines::MonteCarlo: return "mc";
    case Engines::Both: return "both";
  }
  return "both";
}

std::string_view axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::TauDb: return "tau_db";
    case SweepAxis::SigmaM: return "sigma_m";
    case SweepAxis::ParentDensityRatio: return "parent_density_ratio";
  }
  return "tau_db";
}

}  // namespace hetnet
