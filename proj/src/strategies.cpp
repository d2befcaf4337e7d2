#include "pursuit/strategies.hpp"

#include <algorithm>
#include <cmath>

#include "pursuit/regions.hpp"

namespace pursuit {

namespace {

bool is_zero(Point2 p) { return p.x == 0.0 && p.y == 0.0; }

// First direction of the shortest path from a toward b.
Point2 path_heading(const World& world, Point2 a, Point2 b) {
  const ShortestPath path = shortest_path(world, a, b);
  for (std::size_t i = 1; i < path.waypoints.size(); ++i)
    if (distance(path.waypoints[i], a) > 1e-14) return normalized(path.waypoints[i] - a);
  return {0.0, 0.0};
}

}  // namespace

ControlInput gamma_free(Point2 x_p, Point2 x_e, Point2 u_e, double alpha, double l) {
  if (!(distance(x_p, x_e) > l)) throw DomainError("gamma_free: capture already occurred");
  if (is_zero(u_e)) return {normalized(x_e - x_p)};
  const DominanceRegion region(World::free_plane(), x_p, x_e, alpha, l);
  const Point2 x_c = ray_boundary_intersection(region, u_e);
  return {normalized(x_c - x_p)};
}

ControlInput gamma_star_corner(const World& world, Point2 x_p, Point2 x_e, Point2 u_e, double alpha) {
  if (!world.is_corner()) throw StrategyInapplicable("gamma_star_corner: corner world required");
  if (!world.contains(x_p) || !world.contains(x_e)) throw OutsideWorld("gamma_star_corner: player outside X");
  if (!(norm(x_p) < alpha * norm(x_e)))
    throw StrategyInapplicable("gamma_star_corner: requires ||x_p|| < alpha ||x_e|| (vertex outside the region closure)");
  if (distance(x_p, x_e) == 0.0) throw DomainError("gamma_star_corner: players coincide");
  if (is_zero(u_e)) return {path_heading(world, x_p, x_e)};
  const FSet fset(x_p, x_e, alpha);
  const Point2 x_c = fset.ray_intersection(u_e);
  if (fset.branch(x_c) == FSet::Branch::Oval) return {-x_p / norm(x_p)};
  return {normalized(x_c - x_p)};
}

ControlInput gamma_eps_corner(const World& world, Point2 x_p, Point2 x_e, Point2 u_e, double alpha, double epsilon) {
  if (!(epsilon >= 0.0)) throw DomainError("gamma_eps_corner: epsilon must be >= 0");
  ControlInput out = gamma_star_corner(world, x_p, x_e, u_e, alpha);
  if (epsilon == 0.0) return out;
  const MetricGradients g = metric_gradients(world, x_p, x_e);
  out.direction = out.direction - g.grad1 * epsilon;
  out.admissible = false;
  return out;
}

std::string strategy_name(const PursuerStrategy& s) {
  struct Namer {
    std::string operator()(const FreeDeltaStar&) const { return "free_delta_star"; }
    std::string operator()(const CornerGammaStar&) const { return "corner_gamma_star"; }
    std::string operator()(const CornerGammaEps&) const { return "corner_gamma_eps"; }
    std::string operator()(const RetraceInterceptor&) const { return "retrace_interceptor"; }
    std::string operator()(const RunAway&) const { return "run_away"; }
    std::string operator()(const PathChase&) const { return "shortest_path_chase"; }
  };
  return std::visit(Namer{}, s);
}

PursuerController::PursuerController(PursuerStrategy strategy, World world, double alpha, double capture_radius)
    : strategy_(std::move(strategy)), world_(std::move(world)), alpha_(alpha), l_(capture_radius) {
  if (const auto* r = std::get_if<RetraceInterceptor>(&strategy_)) {
    if (!world_.contains(r->target)) throw OutsideWorld("retrace interceptor: target outside X");
    to_target_ = std::make_shared<DistanceField>(world_, r->target);
  }
}

ControlInput PursuerController::operator()(const GameState& s, Point2 u_e, double dt) {
  if (std::holds_alternative<FreeDeltaStar>(strategy_)) return gamma_free(s.x_p, s.x_e, u_e, alpha_, l_);
  if (std::holds_alternative<CornerGammaStar>(strategy_)) return gamma_star_corner(world_, s.x_p, s.x_e, u_e, alpha_);
  if (const auto* eps = std::get_if<CornerGammaEps>(&strategy_))
    return gamma_eps_corner(world_, s.x_p, s.x_e, u_e, alpha_, eps->epsilon);
  if (std::holds_alternative<RunAway>(strategy_)) return {normalized(s.x_p - s.x_e)};
  if (std::holds_alternative<PathChase>(strategy_)) return {path_heading(world_, s.x_p, s.x_e)};
  return retrace(s, dt);
}

ControlInput PursuerController::retrace(const GameState& s, double dt) {
  const Point2 target = std::get<RetraceInterceptor>(strategy_).target;
  if (trail_.empty()) {
    const DominanceRegion region(world_, s.x_p, s.x_e, alpha_, l_);
    if (std::abs(region.phi(target)) > 1e-6 * (1.0 + region.separation()))
      throw DomainError("retrace interceptor: committed point is not on the dominance-region boundary");
  }
  trail_.push_back(s.x_e);
  if (!(dt > 0.0)) return {{0.0, 0.0}, false};
  const double reach = alpha_ * dt;

  if (!cursor_) {
    for (std::size_t k = 0; k < trail_.size(); ++k)
      if (distance(trail_[k], target) <= dt) {
        cursor_ = k;
        break;
      }
  }

  if (phase_ == RetracePhase::Approach) {
    const double remaining = to_target_->distance(s.x_p);
    if (remaining <= reach) {
      phase_ = RetracePhase::Wait;
      if (!cursor_) return {(target - s.x_p) / reach, false};
    } else {
      const ShortestPath path = to_target_->path_to(s.x_p);
      // path runs target -> x_p; the pursuer heads for the waypoint before x_p.
      Point2 next = target;
      for (std::size_t i = path.waypoints.size(); i-- > 0;)
        if (distance(path.waypoints[i], s.x_p) > 1e-14) {
          next = path.waypoints[i];
          break;
        }
      return {normalized(next - s.x_p)};
    }
  }
  if (!cursor_) return {{0.0, 0.0}, false};
  phase_ = RetracePhase::Retrace;

  // Advance along the recorded trail (including the present evader position) by alpha dt.
  double budget = reach;
  Point2 pos = s.x_p;
  std::size_t k = *cursor_;
  while (budget > 0.0 && k < trail_.size()) {
    const double d = distance(pos, trail_[k]);
    if (d <= budget) {
      pos = trail_[k];
      budget -= d;
      ++k;
    } else {
      pos = pos + (trail_[k] - pos) * (budget / d);
      budget = 0.0;
    }
  }
  cursor_ = std::min(k, trail_.size() - 1);
  return {(pos - s.x_p) / reach, false};
}

// ---------------------------------------------------------------------------

std::string policy_name(const EvaderPolicy& p) {
  struct Namer {
    std::string operator()(const StraightLine&) const { return "straight_line"; }
    std::string operator()(const Waypoints&) const { return "waypoints"; }
    std::string operator()(const BoundaryProbe&) const { return "boundary_probe"; }
    std::string operator()(const Scripted&) const { return "scripted"; }
    std::string operator()(const HumanLive&) const { return "human_live"; }
  };
  return std::visit(Namer{}, p);
}

EvaderController::EvaderController(EvaderPolicy policy, World world)
    : policy_(std::move(policy)), world_(std::move(world)) {
  if (const auto* probe = std::get_if<BoundaryProbe>(&policy_)) {
    if (!world_.contains(probe->target)) throw OutsideWorld("boundary probe: target outside X");
    to_target_ = std::make_shared<DistanceField>(world_, probe->target);
  }
  if (const auto* w = std::get_if<Waypoints>(&policy_))
    for (Point2 p : w->points)
      if (!world_.contains(p)) throw OutsideWorld("waypoint outside X");
  if (const auto* sc = std::get_if<Scripted>(&policy_)) {
    if (sc->headings.empty() || sc->headings.size() != sc->switch_times.size())
      throw DomainError("scripted policy: need one switch time per heading");
  }
}

void EvaderController::set_heading(Point2 heading) {
  if (!is_finite(heading)) throw DomainError("heading must be finite");
  held_ = is_zero(heading) ? Point2{0.0, 0.0} : normalized(heading);
}

Point2 EvaderController::raw_direction(const GameState& s, double dt) {
  const Point2 x = s.x_e;
  if (const auto* line = std::get_if<StraightLine>(&policy_)) return normalized(line->direction);
  if (const auto* w = std::get_if<Waypoints>(&policy_)) {
    while (waypoint_ < w->points.size() && distance(x, w->points[waypoint_]) <= 0.5 * dt) ++waypoint_;
    if (waypoint_ < w->points.size()) {
      last_heading_ = normalized(w->points[waypoint_] - x);
      return *last_heading_;
    }
    if (!w->hold_at_end && last_heading_) return *last_heading_;
    return {0.0, 0.0};
  }
  if (std::holds_alternative<BoundaryProbe>(policy_)) {
    const Point2 target = std::get<BoundaryProbe>(policy_).target;
    if (distance(x, target) <= 0.5 * dt) return {0.0, 0.0};
    const ShortestPath path = to_target_->path_to(x);
    for (std::size_t i = path.waypoints.size(); i-- > 0;)
      if (distance(path.waypoints[i], x) > 1e-14) return normalized(path.waypoints[i] - x);
    return {0.0, 0.0};
  }
  if (const auto* sc = std::get_if<Scripted>(&policy_)) {
    std::size_t i = 0;
    while (i + 1 < sc->switch_times.size() && sc->switch_times[i + 1] <= s.t) ++i;
    return normalized(sc->headings[i]);
  }
  return held_.value_or(Point2{0.0, 0.0});
}

ControlInput EvaderController::operator()(const GameState& state, double dt) {
  const Point2 d = raw_direction(state, dt);
  if (is_zero(d)) return {d};
  return slide_heading(world_, state.x_e, d, dt);
}

ControlInput slide_heading(const World& world, Point2 x, Point2 heading, double step) {
  if (world.is_free_plane() || is_zero(heading) || !(step > 0.0)) return {heading};
  const World::Exit ex = world.first_exit(x, x + heading * step);
  if (!ex.edge_tangent || ex.s * step > 1e-9) return {heading};
  const Point2 t = *ex.edge_tangent;
  const double along = dot(heading, t);
  if (std::abs(along) < 1e-12) return {{0.0, 0.0}, true, true};
  const Point2 slid = along > 0.0 ? t : -t;
  const World::Exit again = world.first_exit(x, x + slid * step);
  if (again.edge_tangent && again.s * step <= 1e-9) return {{0.0, 0.0}, true, true};
  return {slid, true, true};
}

}  // namespace pursuit
