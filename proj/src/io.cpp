#include "pursuit/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pursuit {

using ojson = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

ojson pt(Point2 p) { return ojson::array({p.x, p.y}); }

// Non-finite values have no JSON spelling; they become null.
ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << kTrajectoryHeader << '\n';
  for (const auto& r : tr.rows) {
    const double v[] = {r.t, r.x_p.x, r.x_p.y, r.x_e.x, r.x_e.y, r.u_p.x, r.u_p.y, r.u_e.x, r.u_e.y, r.separation};
    for (double x : v) out << format_number(x) << ',';
    out << r.flags << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) throw ParseError("trajectory: unexpected header");
  Trajectory tr;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) throw ParseError("trajectory: line " + std::to_string(lineno) + " has " +
                                             std::to_string(cells.size()) + " columns");
    double v[10];
    try {
      for (int i = 0; i < 10; ++i) v[i] = std::stod(cells[i]);
      TrajectoryRow r{v[0], {v[1], v[2]}, {v[3], v[4]}, {v[5], v[6]}, {v[7], v[8]}, v[9],
                      static_cast<std::uint32_t>(std::stoul(cells[10]))};
      tr.rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ParseError("trajectory: line " + std::to_string(lineno) + " is not numeric");
    }
  }
  return tr;
}

ojson curve_to_json(const ArcCurve& curve) {
  ojson j;
  j["type"] = arc_type_name(curve);
  if (const auto* a = std::get_if<ApolloniusCircle>(&curve)) {
    j["focus_p"] = pt(a->focus_p);
    j["focus_e"] = pt(a->focus_e);
    j["alpha"] = a->alpha;
    j["center"] = pt(a->center());
    j["radius"] = a->radius();
  } else if (const auto* o = std::get_if<OvalCurve>(&curve)) {
    j["kind"] = o->kind == OvalKind::FirstType ? "first" : "second";
    j["outer_focus"] = pt(o->outer_focus);
    j["inner_focus"] = pt(o->inner_focus);
    j["alpha"] = o->alpha;
    j["offset"] = o->offset;
    j["offset_in_classical_range"] = o->offset_in_classical_range();
  } else if (const auto* c = std::get_if<CircleAtVertex>(&curve)) {
    j["center"] = pt(c->center);
    j["radius"] = c->radius;
  }
  return j;
}

ojson boundary_to_json(const BoundaryResult& b) {
  ojson arcs = ojson::array();
  for (const auto& a : b.arcs) {
    ojson points = ojson::array();
    for (const auto& p : a.points) points.push_back(ojson::array({p.x.x, p.x.y, p.residual}));
    ojson arc;
    arc["curve"] = curve_to_json(a.curve);
    arc["parameter"] = a.parameter;
    arc["param_lo"] = num(a.param_lo);
    arc["param_hi"] = num(a.param_hi);
    arc["start"] = pt(a.start);
    arc["end"] = pt(a.end);
    arc["points"] = std::move(points);
    arcs.push_back(std::move(arc));
  }
  ojson poly = ojson::array();
  for (Point2 p : b.polyline()) poly.push_back(pt(p));
  ojson j;
  j["method"] = b.method;
  j["arcs"] = std::move(arcs);
  j["polyline"] = std::move(poly);
  return j;
}

ojson sim_summary_to_json(const SimResult& r) {
  const auto monitor = [](const MonitorReport& m) {
    ojson j;
    j["name"] = m.name;
    j["samples"] = m.samples;
    j["worst"] = num(m.worst);
    j["tolerance"] = num(m.tolerance);
    j["t_worst"] = m.t_worst;
    j["worst_ratio"] = num(m.worst_ratio);
    j["pass"] = m.pass;
    return j;
  };
  ojson j;
  j["outcome"] = outcome_name(r.outcome);
  if (const auto* c = std::get_if<Captured>(&r.outcome)) j["t_f"] = c->t_f;
  if (const auto* v = std::get_if<MonitorViolation>(&r.outcome)) {
    j["violation"] = {{"which", v->which}, {"t", v->t}, {"magnitude", num(v->magnitude)}, {"detail", v->detail}};
  }
  j["initial_separation"] = r.initial_separation;
  j["capture_threshold"] = r.capture_threshold;
  j["capture_bound"] = r.capture_bound;
  j["rows"] = r.trajectory.rows.size();
  j["containment"] = monitor(r.containment);
  j["closing_rate"] = monitor(r.closing_rate);
  ojson events = ojson::array();
  for (const auto& e : r.events) events.push_back({{"t", e.t}, {"what", e.what}});
  j["events"] = std::move(events);
  return j;
}

ojson defense_to_json(const DefenseResult& d) {
  ojson j;
  j["verdict"] = verdict_name(d.verdict);
  j["intersects"] = d.intersects;
  j["max_phi"] = num(d.max_phi);
  j["argmax"] = pt(d.argmax);
  j["reason"] = d.reason;
  return j;
}

ojson check_report_to_json(const CheckReport& r) {
  ojson j;
  j["id"] = r.id;
  j["pass"] = r.pass;
  j["inconclusive"] = r.inconclusive;
  j["samples"] = r.samples;
  j["worst_margin"] = num(r.worst_margin);
  j["tolerance"] = r.tolerance;
  j["witness"] = r.witness;
  ojson stats = ojson::object();
  for (const auto& [k, v] : r.stats) stats[k] = num(v);
  j["stats"] = std::move(stats);
  return j;
}

ojson check_reports_to_json(const std::string& suite, std::uint64_t seed, const std::vector<CheckReport>& reports) {
  ojson checks = ojson::array();
  bool all = true;
  for (const auto& r : reports) {
    checks.push_back(check_report_to_json(r));
    all = all && r.pass;
  }
  ojson j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["pass"] = all;
  j["checks"] = std::move(checks);
  return j;
}

std::string check_report_line(const CheckReport& r) {
  const char* status = !r.pass ? "FAIL" : (r.inconclusive ? "INCONCLUSIVE" : "PASS");
  char buf[160];
  std::snprintf(buf, sizeof buf, " margin=%.6g tol=%.3g n=%zu", r.worst_margin, r.tolerance, r.samples);
  std::string line = std::string(status) + " " + r.id + buf;
  if (!r.pass && !r.witness.empty()) line += " witness: " + r.witness;
  return line;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace pursuit
