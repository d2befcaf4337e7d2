#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pursuit/io.hpp"
#include "pursuit/scenario.hpp"
#include "pursuit/theorem_lab.hpp"

namespace py = pybind11;
using namespace pursuit;

namespace {

using XY = std::pair<double, double>;

Point2 P(const XY& p) { return {p.first, p.second}; }
XY T(Point2 p) { return {p.x, p.y}; }

// JSON documents cross the boundary as text and come back as Python objects.
py::object to_py(const nlohmann::ordered_json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict report_dict(const CheckReport& r) { return to_py(check_report_to_json(r)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dominance regions, pursuit strategies and numerical checks";

  py::register_exception<Error>(m, "PursuitError", PyExc_RuntimeError);
  py::register_exception<OutsideWorld>(m, "OutsideWorld", PyExc_ValueError);
  py::register_exception<NonDifferentiable>(m, "NonDifferentiable", PyExc_ArithmeticError);
  py::register_exception<StrategyInapplicable>(m, "StrategyInapplicable", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<World>(m, "World")
      .def_static("free_plane", &World::free_plane)
      .def_static("corner", [](double theta0_deg) { return World::corner_wedge(theta0_deg * kPi / 180.0); },
                  py::arg("theta0_deg"))
      .def_static("polygons",
                  [](const std::vector<std::vector<XY>>& obstacles) {
                    std::vector<Polygon> polys;
                    for (const auto& o : obstacles) {
                      Polygon p;
                      for (const auto& v : o) p.vertices.push_back(P(v));
                      polys.push_back(std::move(p));
                    }
                    return World::polygons(std::move(polys));
                  },
                  py::arg("obstacles"))
      .def_property_readonly("kind", &World::kind_name)
      .def("contains", [](const World& w, XY x) { return w.contains(P(x)); })
      .def("visible", [](const World& w, XY a, XY b) { return w.visible(P(a), P(b)); })
      .def("__repr__", [](const World& w) { return "<World " + w.kind_name() + ">"; });

  m.def("shortest_distance", [](const World& w, XY a, XY b) { return shortest_distance(w, P(a), P(b)); });
  m.def("shortest_path", [](const World& w, XY a, XY b) {
    const ShortestPath p = shortest_path(w, P(a), P(b));
    std::vector<XY> pts;
    for (Point2 q : p.waypoints) pts.push_back(T(q));
    return py::make_tuple(pts, p.length);
  });
  m.def("metric_gradients", [](const World& w, XY a, XY b) {
    const MetricGradients g = metric_gradients(w, P(a), P(b));
    return py::make_tuple(T(g.grad1), T(g.grad2));
  });
  m.def("eta_m", [](XY x_p, XY x_e, double alpha) { return eta_m(P(x_p), P(x_e), alpha); });

  py::class_<DominanceRegion>(m, "DominanceRegion")
      .def(py::init([](const World& w, XY x_p, XY x_e, double alpha, double l) {
             return DominanceRegion(w, P(x_p), P(x_e), alpha, l);
           }),
           py::arg("world"), py::arg("x_p"), py::arg("x_e"), py::arg("alpha"), py::arg("capture_radius") = 0.0)
      .def("phi", [](const DominanceRegion& r, XY x) { return r.phi(P(x)); })
      .def_property_readonly("separation", &DominanceRegion::separation)
      .def_property_readonly("outer_radius", &DominanceRegion::outer_radius)
      .def("ray_boundary_intersection",
           [](const DominanceRegion& r, XY dir) { return T(ray_boundary_intersection(r, P(dir))); })
      .def("boundary",
           [](const DominanceRegion& r, int n) { return to_py(boundary_to_json(boundary_arcs(r, n))); },
           py::arg("samples") = 720, "Typed boundary arcs as a dict (method, arcs, polyline)");

  m.def("parse_scenario", [](const std::string& text) { return to_py(scenario_to_json(parse_scenario(text))); },
        "Validated and normalized scenario document");

  m.def("simulate",
        [](const std::string& scenario_text) {
          const Scenario sc = parse_scenario(scenario_text);
          SimResult r;
          {
            py::gil_scoped_release release;
            r = run(sc.config);
          }
          py::dict out = to_py(sim_summary_to_json(r));
          py::list rows;
          for (const auto& row : r.trajectory.rows)
            rows.append(py::make_tuple(row.t, T(row.x_p), T(row.x_e), T(row.u_p), T(row.u_e), row.separation, row.flags));
          out["trajectory"] = rows;
          return out;
        },
        py::arg("scenario_json"), "Runs one episode; rows are (t, x_p, x_e, u_p, u_e, separation, flags)");

  m.def("defense_decision", [](const std::string& scenario_text) {
    const Scenario sc = parse_scenario(scenario_text);
    if (!sc.target) throw DomainError("scenario has no target");
    const SimConfig& c = sc.config;
    return to_py(defense_to_json(defense_decision(c.world, c.initial.x_p, c.initial.x_e, c.alpha, *sc.target)));
  });

  m.def("run_suite",
        [](const std::string& suite, std::uint64_t seed) {
          std::vector<CheckReport> reports;
          {
            py::gil_scoped_release release;
            reports = run_suite(suite, seed);
          }
          py::list out;
          for (const auto& r : reports) out.append(report_dict(r));
          return out;
        },
        py::arg("suite"), py::arg("seed") = 7);
  m.def("suite_names", &suite_names);
}
