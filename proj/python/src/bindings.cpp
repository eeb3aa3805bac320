#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "hetnet/analytic.hpp"
#include "hetnet/config.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/kernels.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/network.hpp"
#include "hetnet/pointprocess.hpp"
#include "hetnet/report.hpp"
#include "hetnet/sweep.hpp"

namespace py = pybind11;
using namespace hetnet;

namespace {

CoverageQuery make_query(const NetworkModel& net, const py::object& tau,
                         const QuadratureConfig& quad) {
  CoverageQuery q;
  q.quad = quad;
  if (py::isinstance<py::float_>(tau) || py::isinstance<py::int_>(tau)) {
    q.taus.assign(net.size(), tau.cast<double>());
  } else {
    q.taus = tau.cast<std::vector<double>>();
  }
  return q;
}

McOptions mc_options(std::size_t trials, std::uint64_t seed, unsigned workers) {
  McOptions o;
  o.trials = trials;
  o.seed = seed;
  o.workers = workers;
  return o;
}

py::dict row_dict(const SweepRow& r) {
  py::dict d;
  d["sweep_value"] = r.sweep_value;
  d["tau_db"] = r.tau_db;
  d["engine"] = r.engine == Engines::Analytic ? "analytic" : "mc";
  d["pc_total"] = r.pc_total;
  d["pc_tier"] = r.pc_tier;
  d["assoc_tier"] = r.assoc_tier;
  d["mc_ci_halfwidth"] = r.mc_ci_halfwidth;
  d["error"] = r.failed() ? py::object(py::str(r.error)) : py::object(py::none());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coverage of K-tier networks with Poisson and Poisson-cluster base stations";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<DegenerateCondition>(m, "DegenerateCondition", base.ptr());

  py::class_<QuadratureConfig>(m, "QuadratureConfig")
      .def(py::init<>())
      .def_readwrite("rel_tol", &QuadratureConfig::rel_tol)
      .def_readwrite("abs_tol", &QuadratureConfig::abs_tol)
      .def_readwrite("max_subdivisions", &QuadratureConfig::max_subdivisions)
      .def_readwrite("tail_cutoff_epsilon", &QuadratureConfig::tail_cutoff_epsilon);

  py::class_<OffspringKernel>(m, "OffspringKernel")
      .def_static("gaussian", &OffspringKernel::gaussian, py::arg("sigma"))
      .def_static("uniform_disc", &OffspringKernel::uniform_disc, py::arg("radius"))
      .def_property_readonly("is_gaussian", &OffspringKernel::is_gaussian)
      .def_property_readonly("length", &OffspringKernel::length)
      .def("__repr__", [](const OffspringKernel& k) {
        return std::string(k.is_gaussian() ? "OffspringKernel.gaussian(" : "OffspringKernel.uniform_disc(") +
               format_number(k.length()) + ")";
      });

  py::class_<TierSpec>(m, "TierSpec")
      .def_static("poisson", &TierSpec::poisson, py::arg("density"), py::arg("power"))
      .def_static("cluster", &TierSpec::cluster, py::arg("parent_density"), py::arg("mbar"),
                  py::arg("kernel"), py::arg("power"))
      .def_property_readonly("is_cluster", &TierSpec::is_cluster)
      .def_readwrite("density", &TierSpec::lambda)
      .def_readwrite("parent_density", &TierSpec::parent_lambda)
      .def_readwrite("mbar", &TierSpec::mbar)
      .def_readwrite("kernel", &TierSpec::kernel)
      .def_readwrite("power", &TierSpec::power)
      .def("mean_intensity", &TierSpec::mean_intensity);

  py::class_<UserModel>(m, "UserModel")
      .def_static("type1", &UserModel::type1)
      .def_static("type2", &UserModel::type2, py::arg("q"), py::arg("kernel") = py::none())
      .def_property_readonly("type", [](const UserModel& u) { return u.type == UserType::Type1 ? 1 : 2; })
      .def_readonly("q", &UserModel::q);

  py::class_<NetworkModel>(m, "NetworkModel")
      .def(py::init([](std::vector<TierSpec> tiers, double alpha, double noise, UserModel user) {
             NetworkModel n{std::move(tiers), alpha, noise, std::move(user)};
             n.validate();
             return n;
           }),
           py::arg("tiers"), py::arg("alpha") = 4.0, py::arg("noise") = 0.0,
           py::arg("user") = UserModel::type1())
      .def_readwrite("tiers", &NetworkModel::tiers)
      .def_readwrite("alpha", &NetworkModel::alpha)
      .def_readwrite("noise", &NetworkModel::noise)
      .def_readwrite("user", &NetworkModel::user)
      .def("validate", &NetworkModel::validate)
      .def("__len__", &NetworkModel::size);

  py::class_<CoverageResult>(m, "CoverageResult")
      .def_readonly("per_tier", &CoverageResult::per_tier)
      .def_readonly("total", &CoverageResult::total)
      .def_readonly("association", &CoverageResult::association);

  m.def("db_to_linear", &db_to_linear);
  m.def("linear_to_db", &linear_to_db);
  m.def("rho", py::overload_cast<double, double>(&rho), py::arg("tau"), py::arg("alpha"));
  m.def("bessel_i0_scaled", &bessel_i0_scaled);
  m.def("conditional_distance_pdf", &conditional_distance_pdf, py::arg("kernel"), py::arg("x"),
        py::arg("z"));
  m.def(
      "conditional_distance_cdf",
      [](const OffspringKernel& k, double r, double z) { return conditional_distance_cdf(k, r, z); },
      py::arg("kernel"), py::arg("r"), py::arg("z"));
  m.def(
      "contact_distance_cdf_given_parents",
      [](const OffspringKernel& k, double mbar, const std::vector<double>& parents, double r) {
        return contact_distance_cdf_given_parents(k, mbar, parents, r);
      },
      py::arg("kernel"), py::arg("mbar"), py::arg("parent_distances"), py::arg("r"));
  m.def(
      "cluster_factor",
      [](const OffspringKernel& k, double mbar, double tau, double alpha, double pbar, double r,
         double z) { return cluster_factor(k, mbar, tau, alpha, pbar, r, z); },
      py::arg("kernel"), py::arg("mbar"), py::arg("tau"), py::arg("alpha"), py::arg("pbar"),
      py::arg("r"), py::arg("z"));

  m.def(
      "coverage",
      [](const NetworkModel& net, const py::object& tau, const QuadratureConfig& quad) {
        const CoverageQuery q = make_query(net, tau, quad);
        py::gil_scoped_release release;
        return coverage(net, q);
      },
      py::arg("net"), py::arg("tau"), py::arg("quad") = QuadratureConfig{},
      "Per-tier coverage, total and association. `tau` is linear, one value or one per tier.");
  m.def(
      "coverage_tier",
      [](const NetworkModel& net, const py::object& tau, std::size_t tier,
         const QuadratureConfig& quad) {
        const CoverageQuery q = make_query(net, tau, quad);
        py::gil_scoped_release release;
        return coverage_tier(net, q, tier);
      },
      py::arg("net"), py::arg("tau"), py::arg("tier"), py::arg("quad") = QuadratureConfig{});
  m.def("association_probability", &association_probability, py::arg("net"), py::arg("tier"),
        py::arg("quad") = QuadratureConfig{}, py::call_guard<py::gil_scoped_release>());
  m.def("coverage_ppp_closed_form", &coverage_ppp_closed_form, py::arg("densities"),
        py::arg("powers"), py::arg("taus"), py::arg("alpha"));
  m.def("scale_network", &scale_network, py::arg("net"), py::arg("l"));

  py::class_<WindowPolicy>(m, "WindowPolicy")
      .def(py::init([](double sim_radius, double margin) {
             WindowPolicy w;
             w.sim_radius = sim_radius;
             w.parent_margin_sigmas = margin;
             w.validate();
             return w;
           }),
           py::arg("sim_radius") = 5000.0, py::arg("parent_margin_sigmas") = 6.0)
      .def_readwrite("sim_radius", &WindowPolicy::sim_radius)
      .def_readwrite("parent_margin_sigmas", &WindowPolicy::parent_margin_sigmas);
  m.def("default_window", &default_window, py::arg("net"), py::arg("tau_max"),
        py::arg("epsilon") = 2e-3);

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("trials", &McEstimate::trials)
      .def_readonly("p_hat", &McEstimate::p_hat)
      .def_readonly("ci_halfwidth", &McEstimate::ci_halfwidth)
      .def_readonly("per_tier_joint", &McEstimate::per_tier_joint)
      .def_readonly("association", &McEstimate::association)
      .def_readonly("empty_scene_resamples", &McEstimate::empty_scene_resamples);

  m.def(
      "estimate_coverage",
      [](const NetworkModel& net, const WindowPolicy& w, const std::vector<double>& taus,
         std::size_t trials, std::uint64_t seed, unsigned workers) {
        return estimate_coverage(net, w, taus, mc_options(trials, seed, workers));
      },
      py::arg("net"), py::arg("window"), py::arg("taus"), py::arg("trials"), py::arg("seed"),
      py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def(
      "estimate_coverage_sweep",
      [](const NetworkModel& net, const WindowPolicy& w, const std::vector<double>& taus,
         std::size_t trials, std::uint64_t seed, unsigned workers) {
        return estimate_coverage_sweep(net, w, taus, mc_options(trials, seed, workers));
      },
      py::arg("net"), py::arg("window"), py::arg("taus"), py::arg("trials"), py::arg("seed"),
      py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def(
      "estimate_association",
      [](const NetworkModel& net, const WindowPolicy& w, std::size_t trials, std::uint64_t seed,
         unsigned workers) {
        return estimate_association(net, w, mc_options(trials, seed, workers));
      },
      py::arg("net"), py::arg("window"), py::arg("trials"), py::arg("seed"),
      py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "sample_ppp",
      [](double density, double radius, std::uint64_t seed) {
        Engine rng = make_stream(seed, 0);
        std::vector<std::pair<double, double>> out;
        for (const Point& p : sample_ppp(density, radius, rng)) out.emplace_back(p.x, p.y);
        return out;
      },
      py::arg("density"), py::arg("radius"), py::arg("seed"));
  m.def(
      "build_scene",
      [](const NetworkModel& net, const WindowPolicy& w, std::uint64_t seed) {
        const Scene s = build_scene(net, w, seed);
        std::vector<std::vector<std::pair<double, double>>> tiers;
        for (const auto& pts : s.points_per_tier) {
          auto& t = tiers.emplace_back();
          for (const Point& p : pts) t.emplace_back(p.x, p.y);
        }
        return tiers;
      },
      py::arg("net"), py::arg("window"), py::arg("seed"),
      "Base-station coordinates per tier, in meters around the user at the origin.");

  m.def(
      "run_config",
      [](const std::string& text) {
        const RunConfig cfg = parse_config(text);
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(cfg, {.timing = false});
        }
        py::list rows;
        for (const auto& r : result.rows) rows.append(row_dict(r));
        return rows;
      },
      py::arg("document"),
      "Runs a JSON run configuration and returns one dict per report row.");
}
