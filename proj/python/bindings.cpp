// SPDX-License-Identifier: Apache-2.0

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "halfspace/collision.hpp"
#include "halfspace/config.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/fit.hpp"
#include "halfspace/heat.hpp"
#include "halfspace/nash.hpp"
#include "halfspace/suite.hpp"

namespace py = pybind11;
namespace hs = halfspace;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict check_dict(const hs::InequalityCheck& c) {
  py::dict d;
  d["name"] = c.name;
  d["worst_ratio"] = c.worst_ratio;
  d["worst_prefix"] = c.worst_prefix;
  d["prefix"] = c.prefix;
  d["evaluated"] = c.evaluated;
  d["skipped"] = c.skipped;
  d["violations"] = c.violations;
  d["passed"] = c.passed();
  return d;
}

py::dict fit_dict(const hs::DecayFit& f) {
  py::dict d;
  d["exponent"] = f.exponent;
  d["intercept"] = f.intercept;
  d["residual"] = f.residual;
  d["n_samples"] = f.n_samples;
  return d;
}

py::list rows_list(const std::vector<hs::SummaryRow>& rows) {
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["run"] = r.run;
    d["quantity"] = r.quantity;
    d["predicted"] = r.predicted;
    d["measured"] = r.measured;
    d["tolerance"] = r.tolerance;
    d["passed"] = r.passed;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Half-space kinetic and heat decay lab";

  auto base = py::register_exception<hs::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<hs::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<hs::PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<hs::NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<hs::ZeroSignalError>(m, "ZeroSignalError", base.ptr());
  py::register_exception<hs::TruncationError>(m, "TruncationError", base.ptr());
  py::register_exception<hs::SchemeFailure>(m, "SchemeFailure", base.ptr());
  py::register_exception<hs::InsufficientDataError>(m, "InsufficientDataError", base.ptr());
  py::register_exception<hs::CalibrationStaleError>(m, "CalibrationStaleError", base.ptr());

  py::enum_<hs::CollisionKind>(m, "CollisionKind")
      .value("relaxation_bounded", hs::CollisionKind::RelaxationBounded)
      .value("relaxation_gaussian", hs::CollisionKind::RelaxationGaussian)
      .value("fokker_planck", hs::CollisionKind::FokkerPlanck)
      .value("laplace_beltrami_circle", hs::CollisionKind::LaplaceBeltramiCircle);

  py::enum_<hs::HeatMode>(m, "HeatMode").value("whole", hs::HeatMode::Whole).value("half", hs::HeatMode::Half);

  py::class_<hs::CollisionModel>(m, "CollisionModel")
      .def_readonly("kind", &hs::CollisionModel::kind)
      .def_readonly("c_L", &hs::CollisionModel::c_L)
      .def_readonly("spectral_gap", &hs::CollisionModel::spectral_gap)
      .def_property_readonly("equilibrium", [](const hs::CollisionModel& c) { return to_array(c.equilibrium); })
      .def_property_readonly("v", [](const hs::CollisionModel& c) { return to_array(c.velocity.v()); })
      .def_property_readonly("weights", [](const hs::CollisionModel& c) { return to_array(c.velocity.weights()); })
      .def("apply", [](const hs::CollisionModel& c, py::array_t<double, py::array::c_style | py::array::forcecast> f) {
        if (f.ndim() != 1 || static_cast<std::size_t>(f.size()) != c.size())
          throw hs::PreconditionError("profile length must match the velocity nodes");
        std::vector<double> out(c.size());
        c.apply(f.data(), out.data());
        return to_array(out);
      });

  m.def(
      "collision_model",
      [](hs::CollisionKind kind, std::size_t nodes, double extent) {
        return hs::build_collision(kind, hs::natural_velocity_domain(kind, extent, nodes));
      },
      py::arg("kind"), py::arg("nodes") = 32, py::arg("extent") = 8.0,
      "Build a discrete collision operator on its natural velocity domain.");

  m.def(
      "fit_decay",
      [](const std::vector<double>& t, const std::vector<double>& y, double lo, double hi) {
        return fit_dict(hs::fit_decay(t, y, {lo, hi}));
      },
      py::arg("t"), py::arg("values"), py::arg("lo"), py::arg("hi"));

  m.def(
      "heat_decay",
      [](hs::HeatMode mode, const std::function<double(double)>& rho_in, double t_max, double dx,
         double fit_lo) {
        hs::HeatOptions o;
        o.dx = dx;
        if (fit_lo > 0.0) o.fit_window = hs::FitWindow{fit_lo, t_max};
        // rho_in is a Python callable, so the GIL stays held
        const auto r = hs::heat_decay_experiment(mode, rho_in, t_max, o);
        py::dict d;
        d["zero_signal"] = r.zero_signal;
        d["first_moment_drift"] = r.max_first_moment_drift;
        d["fit"] = r.fit ? py::object(fit_dict(*r.fit)) : py::object(py::none());
        std::vector<double> t, l2;
        for (const auto& s : r.series) {
          t.push_back(s.t);
          l2.push_back(s.l2sq);
        }
        d["t"] = to_array(t);
        d["l2sq"] = to_array(l2);
        return d;
      },
      py::arg("mode"), py::arg("rho_in"), py::arg("t_max"), py::arg("dx") = 0.05, py::arg("fit_lo") = 0.0);

  m.def("heat_half_line_kernel",
        [](const std::function<double(double)>& rho_in, double t, double x) {
          return hs::heat_half_line_kernel(rho_in, t, x);
        },
        py::arg("rho_in"), py::arg("t"), py::arg("x"));

  m.def("nash_suite",
        [](std::uint64_t seed, std::size_t count, unsigned threads) {
          const auto rep = [&] {
            py::gil_scoped_release nogil;
            return hs::run_nash_suite(seed, count, threads);
          }();
          py::list checks;
          for (const auto& c : rep.checks) checks.append(check_dict(c));
          py::dict d;
          d["passed"] = rep.passed();
          d["checks"] = checks;
          d["csv"] = rep.csv();
          return d;
        },
        py::arg("seed") = 1, py::arg("count") = 500, py::arg("threads") = 1);

  m.def("parse_config",
        [](const std::string& text) {
          const auto p = hs::parse_config(text);
          py::list issues;
          for (const auto& i : p.issues) issues.append(py::make_tuple(i.line, i.message));
          py::dict d;
          d["ok"] = p.ok();
          d["issues"] = issues;
          if (p.config) {
            d["name"] = p.config->name;
            d["kind"] = std::string(hs::to_string(p.config->kind));
          }
          return d;
        },
        py::arg("text"));

  m.def("run_config",
        [](const std::string& path, const std::string& out_dir) {
          const auto cfg = hs::load_config(path);
          const auto r = [&] {
            py::gil_scoped_release nogil;
            return hs::execute_scenario(cfg, out_dir);
          }();
          py::dict d;
          d["name"] = r.name;
          d["status"] = r.status;
          d["error"] = r.error;
          d["files"] = r.files;
          d["rows"] = rows_list(r.rows);
          return d;
        },
        py::arg("path"), py::arg("out_dir"));

  m.def("run_suite",
        [](const std::string& name, const std::string& suites_dir, const std::string& out_dir, unsigned parallel) {
          const auto entries = hs::load_suite(name, suites_dir);
          hs::SuiteOptions o;
          o.out_dir = out_dir;
          o.parallel = parallel;
          const auto r = [&] {
            py::gil_scoped_release nogil;
            return hs::run_suite(entries, o);
          }();
          py::dict d;
          d["exit_code"] = r.exit_code();
          d["manifest"] = r.manifest_path;
          py::list runs;
          for (const auto& run : r.runs) runs.append(py::make_tuple(run.name, run.status));
          d["runs"] = runs;
          return d;
        },
        py::arg("name"), py::arg("suites_dir"), py::arg("out_dir"), py::arg("parallel") = 1);

  m.def("verify_manifest",
        [](const std::string& dir) {
          const auto c = hs::verify_manifest(dir);
          py::dict d;
          d["ok"] = c.ok;
          d["problems"] = c.problems;
          d["summary"] = c.summary;
          return d;
        },
        py::arg("dir"));

  m.def("sha256_hex", [](const std::string& bytes) { return hs::sha256_hex(bytes); }, py::arg("data"));
}
