#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cheeselab/cheese.hpp"
#include "cheeselab/cole.hpp"
#include "cheeselab/function.hpp"
#include "cheeselab/geometry.hpp"
#include "cheeselab/measure.hpp"
#include "cheeselab/planio.hpp"
#include "cheeselab/suites.hpp"

namespace py = pybind11;
using namespace cheeselab;

namespace {

cheese::Mode parse_mode(const std::string& mode) {
  if (mode == "thm14") return cheese::Mode::Thm14;
  if (mode == "thm15") return cheese::Mode::Thm15;
  throw std::invalid_argument("mode must be 'thm14' or 'thm15'");
}

py::dict outcome_dict(const measure::TestOutcome& r) {
  py::dict d;
  d["pass"] = r.pass;
  d["observed"] = r.observed;
  d["expected"] = r.expected;
  d["residual"] = r.residual;
  d["threshold"] = r.threshold;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cheeselab, m) {
  m.doc() = "truncated swiss-cheese sets, annihilating boundary measures, root extensions";

  py::class_<geom::Disc>(m, "Disc")
      .def(py::init<std::complex<double>, double>(), py::arg("center"), py::arg("radius"))
      .def_readonly("center", &geom::Disc::center)
      .def_readonly("radius", &geom::Disc::radius)
      .def("__repr__", [](const geom::Disc& d) {
        return "Disc(center=(" + util::fmt_g17(d.center.real()) + "," +
               util::fmt_g17(d.center.imag()) + "), radius=" + util::fmt_g17(d.radius) + ")";
      });

  m.def("distance_to_point", &geom::distance_to_point, py::arg("disc"), py::arg("point"));
  m.def(
      "circle_intersection_angles",
      [](const geom::Disc& a, const geom::Disc& b) -> py::object {
        auto r = geom::circle_intersection_angles(a, b);
        if (!r) return py::none();
        return py::make_tuple(r->first, r->second);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "winding_number",
      [](const geom::Disc& outer, const std::vector<geom::Disc>& holes, std::complex<double> w,
         double tol) {
        return geom::winding_number(geom::boundary_arcs(outer, holes), w, tol);
      },
      py::arg("outer"), py::arg("holes"), py::arg("point"), py::arg("tol") = 1e-9);

  py::class_<cheese::CheesePlan>(m, "CheesePlan")
      .def_property_readonly("mode",
                             [](const cheese::CheesePlan& p) {
                               return p.mode == cheese::Mode::Thm14 ? "thm14" : "thm15";
                             })
      .def_property_readonly("hole_count",
                             [](const cheese::CheesePlan& p) { return p.holes.size(); })
      .def_property_readonly("budget", [](const cheese::CheesePlan& p) { return p.budget_r; })
      .def("radius_sum", &cheese::CheesePlan::radius_sum)
      .def("holes",
           [](const cheese::CheesePlan& p) {
             std::vector<geom::Disc> out;
             for (const auto& h : p.holes) out.push_back(h.disc);
             return out;
           })
      .def("lambda_excluded_measure",
           [](const cheese::CheesePlan& p) -> py::object {
             if (!p.lambda) return py::none();
             return py::float_(p.lambda->excluded_measure);
           })
      .def("save", [](const cheese::CheesePlan& p, const std::string& path) {
        io::save_plan(p, path);
      });

  m.def(
      "build_plan",
      [](const std::string& mode, int covers, double budget, int discs_per_family, double s_min,
         double mesh, double rho_max, uint64_t seed) {
        cheese::BuildOptions opt;
        opt.mode = parse_mode(mode);
        opt.covers = covers;
        opt.budget = budget;
        opt.discs_per_family = discs_per_family;
        opt.s_min = s_min;
        opt.mesh = mesh;
        opt.rho_max = rho_max;
        opt.seed = seed;
        return cheese::build_plan(opt);
      },
      py::arg("mode"), py::arg("covers") = 12, py::arg("budget") = 1.0,
      py::arg("discs_per_family") = 5, py::arg("s_min") = 0.02, py::arg("mesh") = 1.0,
      py::arg("rho_max") = 6.0, py::arg("seed") = 1);

  m.def("load_plan", &io::load_plan, py::arg("path"));
  m.def("epsilon_budget", &cheese::epsilon_budget, py::arg("n"), py::arg("r"), py::arg("delta_n"));
  m.def("verify_budgets",
        [](const cheese::CheesePlan& plan, double nu) {
          auto report = cheese::verify_budgets(plan, nu);
          py::list rows;
          for (const auto& c : report.checks) {
            py::dict d;
            d["name"] = c.name;
            d["value"] = c.value;
            d["bound"] = c.bound;
            d["margin"] = c.margin;
            d["pass"] = c.pass;
            rows.append(d);
          }
          return py::make_tuple(report.all_pass, rows);
        },
        py::arg("plan"), py::arg("nu"));

  m.def("residue_series_oracle", &measure::residue_series_oracle, py::arg("c"));
  m.def(
      "separation_test",
      [](const cheese::CheesePlan& plan, int n, double rho1, double rho2, double tol) {
        return outcome_dict(measure::separation_test(plan, n, rho1, rho2, tol));
      },
      py::arg("plan"), py::arg("n"), py::arg("rho1"), py::arg("rho2"), py::arg("tol") = 1e-8);
  m.def(
      "annihilation_test",
      [](const cheese::CheesePlan& plan, int n, double rho2, std::complex<double> pole,
         double tol) {
        fn::RationalFunction g;
        g.poles.emplace_back(pole, 1);
        return outcome_dict(measure::annihilation_test(plan, n, rho2, g, tol));
      },
      py::arg("plan"), py::arg("n"), py::arg("rho2"), py::arg("pole"), py::arg("tol") = 1e-8);
  m.def(
      "total_variation_bound",
      [](const cheese::CheesePlan& plan, int n, double rho2, double tol) {
        auto mu = measure::make_measure(measure::truncated_contour(plan, n), rho2, tol);
        const double tv = measure::total_variation(mu);
        double weighted = 0.0;
        for (int k = 0; k < n; ++k) {
          const auto& h = plan.holes[static_cast<size_t>(k)].disc;
          const double s = geom::distance_to_point(h, {1.0, 0.0});
          weighted += h.radius * std::exp(2.0 * rho2 / s);
        }
        const double bound = geom::kTau * (weighted + 2.0);
        return py::make_tuple(tv, bound);
      },
      py::arg("plan"), py::arg("n"), py::arg("rho2"), py::arg("tol") = 1e-10);
  m.def(
      "peak_margin",
      [](const cheese::CheesePlan& plan, double neighborhood, long samples) {
        return fn::peak_margin(plan.full_region(), neighborhood, samples, plan.seed);
      },
      py::arg("plan"), py::arg("neighborhood") = 0.1, py::arg("samples") = 100000);

  m.def(
      "singular_generator_value",
      [](double rho, std::complex<double> z, std::complex<double> lambda) {
        return fn::eval(fn::singular_generator(rho, lambda), z);
      },
      py::arg("rho"), py::arg("z"), py::arg("lambda") = std::complex<double>(1.0, 0.0));
}
