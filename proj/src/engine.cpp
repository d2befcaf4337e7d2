#include "pursuit/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace pursuit {

std::string outcome_name(const SimOutcome& o) {
  struct Namer {
    std::string operator()(const Captured&) const { return "captured"; }
    std::string operator()(const TimedOut&) const { return "timed_out"; }
    std::string operator()(const MonitorViolation&) const { return "monitor_violation"; }
  };
  return std::visit(Namer{}, o);
}

Point2 project_move(const World& world, Point2 x, Point2 displacement, bool* slid) {
  if (slid) *slid = false;
  const Point2 target = x + displacement;
  if (world.is_free_plane()) return target;
  const World::Exit ex = world.first_exit(x, target);
  if (!ex.edge_tangent) return target;
  if (slid) *slid = true;
  const Point2 contact = x + displacement * ex.s;
  if (!world.contains(contact)) return x;
  const Point2 t = *ex.edge_tangent;
  const Point2 rest = displacement * (1.0 - ex.s);
  const Point2 candidate = contact + t * dot(rest, t);
  if (world.contains(candidate) && world.segment_clear(contact, candidate)) return candidate;
  return contact;
}

GameState step(const GameState& s, Point2 u_p, Point2 u_e, double dt, const World& world, double alpha,
               StepFlags* flags) {
  bool sp = false, se = false;
  GameState out;
  out.t = s.t + dt;
  out.x_p = dt == 0.0 ? s.x_p : project_move(world, s.x_p, u_p * (alpha * dt), &sp);
  out.x_e = dt == 0.0 ? s.x_e : project_move(world, s.x_e, u_e * dt, &se);
  if (flags) *flags = {sp, se};
  return out;
}

double capture_threshold(const SimConfig& c) {
  if (c.world.is_free_plane() && c.capture_radius > 0.0) return c.capture_radius;
  return c.capture_epsilon;
}

double capture_time_bound(double d0, double l, double alpha) { return (d0 - l) / (alpha - 1.0); }

double containment_tolerance(double alpha, double dt) { return 10.0 * (alpha + 1.0) * dt; }

namespace {

// Smallest s in [0, 1] with |r0 + s (r1 - r0)| <= thr, if any.
std::optional<double> first_contact(Point2 r0, Point2 r1, double thr) {
  if (norm(r0) <= thr) return 0.0;
  const Point2 dr = r1 - r0;
  const double a = dot(dr, dr), b = 2.0 * dot(r0, dr), c = dot(r0, r0) - thr * thr;
  if (a == 0.0) return std::nullopt;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double s = (-b - std::sqrt(disc)) / (2.0 * a);
  if (s >= 0.0 && s <= 1.0) return s;
  return std::nullopt;
}

std::string fmt_time(double t) {
  std::ostringstream os;
  os.precision(6);
  os << "t=" << t;
  return os.str();
}

}  // namespace

namespace {

SimConfig validated(SimConfig c) {
  if (!(c.alpha > 1.0)) throw DomainError("simulation: alpha must exceed 1");
  if (!(c.dt > 0.0)) throw DomainError("simulation: dt must be positive");
  if (!(c.t_max >= 0.0)) throw DomainError("simulation: t_max must be >= 0");
  if (c.world.has_obstacles() && c.capture_radius != 0.0)
    throw DomainError("simulation: capture radius must be 0 with obstacles");
  if (c.input_delay_steps < 0) throw DomainError("simulation: input delay must be >= 0");
  return c;
}

}  // namespace

Episode::Episode(SimConfig config)
    : config_(validated(std::move(config))),
      initial_region_(config_.world, config_.initial.x_p, config_.initial.x_e, config_.alpha, config_.capture_radius),
      pursuer_(config_.pursuer, config_.world, config_.alpha, config_.capture_radius),
      evader_(config_.evader, config_.world),
      delayed_(static_cast<std::size_t>(config_.input_delay_steps), Point2{0.0, 0.0}) {
  const SimConfig& c = config_;
  result_.initial_separation = initial_region_.separation();
  result_.capture_threshold = capture_threshold(c);
  result_.capture_bound = capture_time_bound(result_.initial_separation, c.capture_radius, c.alpha);
  if (!(distance(c.initial.x_p, c.initial.x_e) > result_.capture_threshold))
    throw DomainError("simulation: initial separation must exceed the capture threshold");
  state_ = c.initial;
  state_.t = 0.0;
  result_.outcome = TimedOut{};
  n_steps_ = static_cast<long>(std::ceil(c.t_max / c.dt - 1e-9));
}

void Episode::set_evader_heading(Point2 heading) {
  if (!std::holds_alternative<HumanLive>(config_.evader)) throw DomainError("evader heading: policy is not human_live");
  evader_.set_heading(heading);
}

std::size_t Episode::advance() {
  if (finished_) return 0;
  const SimConfig& c = config_;
  const World& w = c.world;
  auto& rows = result_.trajectory.rows;
  const auto sep = [&](Point2 a, Point2 b) { return shortest_distance(w, a, b); };
  const GameState s = state_;
  const long k = tick_;

  TrajectoryRow row;
  row.t = s.t;
  row.x_p = s.x_p;
  row.x_e = s.x_e;
  row.separation = sep(s.x_p, s.x_e);
  if (k >= n_steps_) {
    rows.push_back(row);
    finished_ = true;
    return 1;
  }
  const double h = std::min(c.dt, c.t_max - k * c.dt);

  ControlInput ue, up;
  try {
    ue = evader_(s, h);
    Point2 seen = ue.direction;
    if (c.input_delay_steps > 0) {
      delayed_.push_back(ue.direction);
      seen = delayed_.front();
      delayed_.pop_front();
    }
    up = pursuer_(s, seen, h);
  } catch (const Error& e) {
    rows.push_back(row);
    outcome_ = MonitorViolation{"strategy", s.t, 0.0, e.what()};
    finished_ = true;
    return 1;
  }
  row.u_p = up.direction;
  row.u_e = ue.direction;
  if (ue.slid) {
    row.flags |= kEvaderSlid;
    result_.events.push_back({s.t, fmt_time(s.t) + " evader heading projected onto an obstacle edge"});
  }
  if (!up.admissible && std::abs(norm(up.direction) - 1.0) > 1e-12) row.flags |= kNonAdmissibleInput;

  StepFlags sf;
  GameState next = step(s, up.direction, ue.direction, h, w, c.alpha, &sf);
  next.t = (k + 1 == n_steps_) ? c.t_max : (k + 1) * c.dt;
  if (sf.pursuer_slid) row.flags |= kPursuerSlid;
  if (sf.evader_slid && !ue.slid) {
    row.flags |= kEvaderSlid;
    result_.events.push_back({s.t, fmt_time(s.t) + " evader slid along an obstacle edge"});
  }
  rows.push_back(row);
  ++tick_;

  if (const auto hit = first_contact(s.x_e - s.x_p, next.x_e - next.x_p, result_.capture_threshold)) {
    TrajectoryRow last;
    last.t = s.t + (next.t - s.t) * *hit;
    last.x_p = s.x_p + (next.x_p - s.x_p) * *hit;
    last.x_e = s.x_e + (next.x_e - s.x_e) * *hit;
    last.u_p = row.u_p;
    last.u_e = row.u_e;
    last.separation = sep(last.x_p, last.x_e);
    std::size_t added = 1;
    if (*hit > 0.0) {
      rows.push_back(last);
      ++added;
    }
    outcome_ = Captured{last.t};
    state_ = {last.t, last.x_p, last.x_e};
    finished_ = true;
    return added;
  }
  state_ = next;
  return 1;
}

SimResult Episode::finish() {
  while (!finished_) advance();
  return summarize();
}

SimResult Episode::summarize() const {
  const SimConfig& c = config_;
  const World& w = c.world;
  SimResult res = result_;
  res.outcome = outcome_;
  auto& rows = res.trajectory.rows;

  const double tol_c = containment_tolerance(c.alpha, c.dt);
  res.containment = monitor_containment(res.trajectory, initial_region_, tol_c);
  res.closing_rate = monitor_closing_rate(res.trajectory, c.alpha, w);
  if (!c.monitors.containment) res.containment.pass = true;
  if (!c.monitors.closing_rate) res.closing_rate.pass = true;

  // Tag rows and optionally stop at the first violation.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (c.monitors.containment && -initial_region_.phi(rows[i].x_e) > tol_c) rows[i].flags |= kContainmentViolation;
    if (c.monitors.closing_rate && i + 1 < rows.size()) {
      const double dtau = rows[i + 1].t - rows[i].t;
      if (dtau > 0.0) {
        const double rate = (rows[i + 1].separation - rows[i].separation) / dtau;
        if (rate - (1.0 - c.alpha) > closing_rate_tolerance(w, rows[i], dtau, c.alpha))
          rows[i].flags |= kClosingRateViolation;
      }
    }
  }
  if (c.stop_on_violation && !std::holds_alternative<MonitorViolation>(res.outcome)) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::uint32_t bad = rows[i].flags & (kContainmentViolation | kClosingRateViolation);
      if (!bad) continue;
      const bool contain = bad & kContainmentViolation;
      const MonitorReport& rep = contain ? res.containment : res.closing_rate;
      res.outcome = MonitorViolation{rep.name, rows[i].t, rep.worst, "first violating tick"};
      rows.resize(i + 1);
      break;
    }
  }
  return res;
}

SimResult run(const SimConfig& c) { return Episode(c).finish(); }

MonitorReport monitor_containment(const Trajectory& tr, const DominanceRegion& initial, double tol) {
  MonitorReport rep;
  rep.name = "containment";
  rep.tolerance = tol;
  rep.worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : tr.rows) {
    const double v = -initial.phi(r.x_e);
    ++rep.samples;
    if (v > rep.worst) {
      rep.worst = v;
      rep.t_worst = r.t;
    }
  }
  if (rep.samples == 0) rep.worst = 0.0;
  rep.worst_ratio = rep.worst / tol;
  rep.pass = rep.worst <= tol;
  return rep;
}

double closing_rate_tolerance(const World& world, const TrajectoryRow& row, double dtau, double alpha) {
  double radius = row.separation;
  if (world.has_obstacles()) {
    const ShortestPath path = shortest_path(world, row.x_p, row.x_e);
    const auto& wp = path.waypoints;
    if (wp.size() > 2) radius = std::min({radius, distance(row.x_p, wp[1]), distance(row.x_e, wp[wp.size() - 2])});
  }
  return 1e-2 + (alpha + 1.0) * (alpha + 1.0) * dtau / (2.0 * radius);
}

MonitorReport monitor_closing_rate(const Trajectory& tr, double alpha, const World& world) {
  MonitorReport rep;
  rep.name = "closing_rate";
  rep.worst = -std::numeric_limits<double>::infinity();
  rep.worst_ratio = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t i = 0; i + 1 < tr.rows.size(); ++i) {
    const auto& a = tr.rows[i];
    const auto& b = tr.rows[i + 1];
    const double dtau = b.t - a.t;
    if (!(dtau > 0.0)) continue;
    const double excess = (b.separation - a.separation) / dtau - (1.0 - alpha);
    const double tol = closing_rate_tolerance(world, a, dtau, alpha);
    ++rep.samples;
    // Report the worst excess relative to its own tolerance.
    if (excess - tol > rep.worst - rep.tolerance || rep.samples == 1) {
      rep.worst = excess;
      rep.tolerance = tol;
      rep.t_worst = a.t;
    }
    rep.worst_ratio = std::max(rep.worst_ratio, excess / tol);
    if (excess > tol) ok = false;
  }
  if (rep.samples == 0) {
    rep.worst = 0.0;
    rep.worst_ratio = 0.0;
    rep.tolerance = 1e-2;
  }
  rep.pass = ok;
  return rep;
}

}  // namespace pursuit
