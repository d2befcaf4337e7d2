#include "pursuit/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pursuit {

using nlohmann::json;

namespace {

constexpr double kDeg = kPi / 180.0;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "must be finite");
  return v;
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

Point2 point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [x, y]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

std::vector<Point2> points(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of [x, y]");
  std::vector<Point2> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

json pt(Point2 p) { return json::array({p.x, p.y}); }

json pts(const std::vector<Point2>& v) {
  json a = json::array();
  for (Point2 p : v) a.push_back(pt(p));
  return a;
}

PursuerStrategy pursuer_from_json(const json& j, const std::string& where) {
  const std::string tag = text(need(j, "strategy", where), where + ".strategy");
  if (tag == "free_delta_star") return FreeDeltaStar{};
  if (tag == "corner_gamma_star") return CornerGammaStar{};
  if (tag == "corner_gamma_eps") return CornerGammaEps{number_or(j, "epsilon", 1e-2, where)};
  if (tag == "retrace_interceptor") return RetraceInterceptor{point(need(j, "target", where), where + ".target")};
  if (tag == "run_away") return RunAway{};
  if (tag == "shortest_path_chase") return PathChase{};
  fail(where + ".strategy", "unknown strategy '" + tag + "'");
}

json pursuer_to_json(const PursuerStrategy& s) {
  json j{{"strategy", strategy_name(s)}};
  if (const auto* e = std::get_if<CornerGammaEps>(&s)) j["epsilon"] = e->epsilon;
  if (const auto* r = std::get_if<RetraceInterceptor>(&s)) j["target"] = pt(r->target);
  return j;
}

EvaderPolicy evader_from_json(const json& j, const std::string& where) {
  const std::string tag = text(need(j, "policy", where), where + ".policy");
  if (tag == "straight_line") return StraightLine{point(need(j, "direction", where), where + ".direction")};
  if (tag == "waypoints") {
    Waypoints w{points(need(j, "points", where), where + ".points"), true};
    if (j.contains("hold_at_end")) {
      if (!j["hold_at_end"].is_boolean()) fail(where + ".hold_at_end", "expected true or false");
      w.hold_at_end = j["hold_at_end"].get<bool>();
    }
    return w;
  }
  if (tag == "boundary_probe") return BoundaryProbe{point(need(j, "target", where), where + ".target")};
  if (tag == "scripted") {
    Scripted s;
    const json& times = need(j, "switch_times", where);
    if (!times.is_array()) fail(where + ".switch_times", "expected a list of numbers");
    for (std::size_t i = 0; i < times.size(); ++i)
      s.switch_times.push_back(number(times[i], where + ".switch_times[" + std::to_string(i) + "]"));
    s.headings = points(need(j, "headings", where), where + ".headings");
    if (s.headings.empty() || s.headings.size() != s.switch_times.size())
      fail(where, "scripted policy needs one switch time per heading");
    return s;
  }
  if (tag == "human_live") return HumanLive{};
  fail(where + ".policy", "unknown policy '" + tag + "'");
}

json evader_to_json(const EvaderPolicy& p) {
  json j{{"policy", policy_name(p)}};
  if (const auto* s = std::get_if<StraightLine>(&p)) j["direction"] = pt(s->direction);
  if (const auto* w = std::get_if<Waypoints>(&p)) {
    j["points"] = pts(w->points);
    j["hold_at_end"] = w->hold_at_end;
  }
  if (const auto* b = std::get_if<BoundaryProbe>(&p)) j["target"] = pt(b->target);
  if (const auto* s = std::get_if<Scripted>(&p)) {
    j["switch_times"] = s->switch_times;
    j["headings"] = pts(s->headings);
  }
  return j;
}

bool flag_or(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) fail(where + "." + key, "expected true or false");
  return j.at(key).get<bool>();
}

}  // namespace

World world_from_json(const json& j) {
  const std::string where = "world";
  const std::string kind = text(need(j, "kind", where), "world.kind");
  try {
    if (kind == "free_plane") return World::free_plane();
    if (kind == "corner") {
      if (j.contains("theta0_deg")) return World::corner_wedge(number(j["theta0_deg"], "world.theta0_deg") * kDeg);
      return World::corner_wedge(number(need(j, "theta0", where), "world.theta0"));
    }
    if (kind == "polygons") {
      const json& obs = need(j, "obstacles", where);
      if (!obs.is_array()) fail("world.obstacles", "expected a list of polygons");
      std::vector<Polygon> polys;
      for (std::size_t i = 0; i < obs.size(); ++i)
        polys.push_back(Polygon{points(obs[i], "world.obstacles[" + std::to_string(i) + "]")});
      return World::polygons(std::move(polys));
    }
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  fail("world.kind", "unknown world kind '" + kind + "' (free_plane, corner, polygons)");
}

json world_to_json(const World& w) {
  if (w.is_free_plane()) return {{"kind", "free_plane"}};
  if (w.is_corner()) return {{"kind", "corner"}, {"theta0_deg", w.theta0() / kDeg}};
  json obs = json::array();
  for (const auto& p : std::get<Polygons>(w.kind()).obstacles) obs.push_back(pts(p.vertices));
  return {{"kind", "polygons"}, {"obstacles", obs}};
}

TargetShape target_shape_from_json(const json& j) {
  const std::string where = "target";
  const std::string type = text(need(j, "type", where), "target.type");
  if (type == "half_plane") {
    const Point2 n = point(need(j, "normal", where), "target.normal");
    if (norm(n) == 0.0) fail("target.normal", "must be non-zero");
    return HalfPlane{n, number(need(j, "offset", where), "target.offset")};
  }
  if (type == "disk") {
    const double r = number(need(j, "radius", where), "target.radius");
    if (!(r > 0.0)) fail("target.radius", "must be positive");
    return Disk{point(need(j, "center", where), "target.center"), r};
  }
  if (type == "polygon") {
    auto v = points(need(j, "vertices", where), "target.vertices");
    if (v.size() < 3) fail("target.vertices", "need at least 3 vertices");
    return PolygonTarget{std::move(v)};
  }
  if (type == "region_complement") return RegionComplement{};
  fail("target.type", "unknown target type '" + type + "' (half_plane, disk, polygon, region_complement)");
}

json target_shape_to_json(const TargetShape& s) {
  if (const auto* h = std::get_if<HalfPlane>(&s)) return {{"type", "half_plane"}, {"normal", pt(h->normal)}, {"offset", h->offset}};
  if (const auto* d = std::get_if<Disk>(&s)) return {{"type", "disk"}, {"center", pt(d->center)}, {"radius", d->radius}};
  if (const auto* p = std::get_if<PolygonTarget>(&s)) return {{"type", "polygon"}, {"vertices", pts(p->vertices)}};
  return {{"type", "region_complement"}};
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("scenario: expected a JSON object");
  Scenario s;
  if (j.contains("name")) s.name = text(j["name"], "name");
  if (j.contains("description")) s.description = text(j["description"], "description");
  SimConfig& c = s.config;
  c.world = world_from_json(need(j, "world", "scenario"));
  c.alpha = number(need(j, "alpha", "scenario"), "alpha");
  if (!(c.alpha > 1.0)) fail("alpha", "must exceed 1");
  c.capture_radius = number_or(j, "capture_radius", 0.0, "scenario");
  if (c.capture_radius < 0.0) fail("capture_radius", "must be >= 0");
  if (c.world.has_obstacles() && c.capture_radius != 0.0) fail("capture_radius", "must be 0 with obstacles");
  c.dt = number_or(j, "dt", 1e-3, "scenario");
  if (!(c.dt > 0.0)) fail("dt", "must be positive");
  c.t_max = number_or(j, "t_max", 10.0, "scenario");
  if (!(c.t_max >= 0.0)) fail("t_max", "must be >= 0");
  c.capture_epsilon = number_or(j, "capture_epsilon", 1e-3, "scenario");
  if (!(c.capture_epsilon > 0.0)) fail("capture_epsilon", "must be positive");
  if (j.contains("input_delay_steps")) {
    if (!j["input_delay_steps"].is_number_integer() || j["input_delay_steps"].get<int>() < 0)
      fail("input_delay_steps", "expected a non-negative integer");
    c.input_delay_steps = j["input_delay_steps"].get<int>();
  }

  const json& p = need(j, "pursuer", "scenario");
  const json& e = need(j, "evader", "scenario");
  c.initial = {0.0, point(need(p, "x", "pursuer"), "pursuer.x"), point(need(e, "x", "evader"), "evader.x")};
  if (!c.world.contains(c.initial.x_p)) fail("pursuer.x", "outside the playable region");
  if (!c.world.contains(c.initial.x_e)) fail("evader.x", "outside the playable region");
  c.pursuer = pursuer_from_json(p, "pursuer");
  c.evader = evader_from_json(e, "evader");

  if (j.contains("monitors")) {
    const json& m = j["monitors"];
    c.monitors.containment = flag_or(m, "containment", true, "monitors");
    c.monitors.closing_rate = flag_or(m, "closing_rate", true, "monitors");
    c.stop_on_violation = flag_or(m, "stop_on_violation", false, "monitors");
  }
  if (j.contains("target")) {
    const json& t = j["target"];
    TargetRegion region;
    if (t.is_array())
      for (const auto& part : t) region.parts.push_back(target_shape_from_json(part));
    else
      region.parts.push_back(target_shape_from_json(t));
    if (region.parts.empty()) fail("target", "empty target");
    s.target = std::move(region);
  }
  if (j.contains("boundary_samples")) {
    if (!j["boundary_samples"].is_number_integer() || j["boundary_samples"].get<int>() < 8)
      fail("boundary_samples", "expected an integer >= 8");
    s.boundary_samples = j["boundary_samples"].get<int>();
  }
  if (j.contains("session")) {
    const json& o = j["session"];
    s.session.tick_rate = number_or(o, "tick_rate", 50.0, "session");
    if (s.session.tick_rate < 0.0) fail("session.tick_rate", "must be >= 0");
    if (o.contains("boundary_refresh_ticks")) {
      if (!o["boundary_refresh_ticks"].is_number_integer() || o["boundary_refresh_ticks"].get<int>() < 0)
        fail("session.boundary_refresh_ticks", "expected a non-negative integer");
      s.session.boundary_refresh_ticks = o["boundary_refresh_ticks"].get<int>();
    }
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  const SimConfig& c = s.config;
  json p = pursuer_to_json(c.pursuer);
  p["x"] = pt(c.initial.x_p);
  json e = evader_to_json(c.evader);
  e["x"] = pt(c.initial.x_e);
  json j{{"name", s.name},
         {"description", s.description},
         {"world", world_to_json(c.world)},
         {"alpha", c.alpha},
         {"capture_radius", c.capture_radius},
         {"dt", c.dt},
         {"t_max", c.t_max},
         {"capture_epsilon", c.capture_epsilon},
         {"input_delay_steps", c.input_delay_steps},
         {"pursuer", p},
         {"evader", e},
         {"monitors",
          {{"containment", c.monitors.containment},
           {"closing_rate", c.monitors.closing_rate},
           {"stop_on_violation", c.stop_on_violation}}},
         {"boundary_samples", s.boundary_samples},
         {"session", {{"tick_rate", s.session.tick_rate}, {"boundary_refresh_ticks", s.session.boundary_refresh_ticks}}}};
  if (s.target) {
    json t = json::array();
    for (const auto& part : s.target->parts) t.push_back(target_shape_to_json(part));
    j["target"] = t;
  }
  return j;
}

Scenario parse_scenario(const std::string& text_in) {
  json j;
  try {
    j = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: malformed JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace pursuit
