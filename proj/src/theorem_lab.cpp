#include "pursuit/theorem_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pursuit/roots.hpp"

namespace pursuit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDeg = kPi / 180.0;

using Rng = std::mt19937_64;

double uniform(Rng& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

Point2 unit_at(double a) { return from_polar(1.0, a); }

std::string fmt(Point2 p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Records a sample margin, keeping the witness of the worst one.
struct Tracker {
  CheckReport rep;
  explicit Tracker(std::string id, double tol) {
    rep.id = std::move(id);
    rep.tolerance = tol;
    rep.worst_margin = kInf;
  }
  template <class W>
  void add(double margin, W&& witness) {
    ++rep.samples;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.witness = witness();
    }
  }
  CheckReport done() { return finish_report(std::move(rep)); }
};

CheckReport merge(std::string id, const std::vector<CheckReport>& parts) {
  CheckReport out;
  out.id = std::move(id);
  out.worst_margin = kInf;
  for (const auto& p : parts) {
    out.samples += p.samples;
    out.tolerance = p.tolerance;
    if (p.worst_margin < out.worst_margin) {
      out.worst_margin = p.worst_margin;
      out.witness = p.witness;
    }
    for (const auto& [k, v] : p.stats) {
      if (k.rfind("max_", 0) == 0) out.stats[k] = out.stats.count(k) ? std::max(out.stats[k], v) : v;
      else if (k.rfind("min_", 0) == 0) out.stats[k] = out.stats.count(k) ? std::min(out.stats[k], v) : v;
      else out.stats[k] += v;
    }
  }
  return finish_report(out);
}

Point2 random_point(const World& w, Rng& g, double half_width, Point2 center = {0.0, 0.0}) {
  for (int i = 0; i < 100000; ++i) {
    const Point2 p = center + Point2{uniform(g, -half_width, half_width), uniform(g, -half_width, half_width)};
    if (w.contains(p)) return p;
  }
  throw DomainError("random_point: could not sample a point of X");
}

Point2 random_corner_point(double theta0, Rng& g, double rho_lo, double rho_hi) {
  return from_polar(uniform(g, rho_lo, rho_hi), uniform(g, theta0, 2.0 * kPi - theta0));
}

// Signed angle from a to b.
double signed_angle(Point2 a, Point2 b) { return std::atan2(cross(a, b), dot(a, b)); }

double cos_between(Point2 a, Point2 b) { return std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0); }

struct CornerConfig {
  World world;
  Point2 x_p, x_e;
  double alpha;
};

CornerConfig random_corner_config(Rng& g) {
  for (;;) {
    const double theta0 = uniform(g, 2.0, 45.0) * kDeg;
    const double alpha = uniform(g, 1.1, 3.0);
    const Point2 x_e = random_corner_point(theta0, g, 0.5, 6.0);
    const Point2 x_p = random_corner_point(theta0, g, 0.2, 9.0);
    if (!(norm(x_p) < alpha * norm(x_e) * (1.0 - 1e-3))) continue;
    if (distance(x_p, x_e) < 0.3) continue;
    return {World::corner_wedge(theta0), x_p, x_e, alpha};
  }
}

struct FreeConfig {
  Point2 x_p, x_e;
  double alpha, l;
};

FreeConfig random_free_config(Rng& g, bool allow_l = true) {
  FreeConfig c;
  c.alpha = uniform(g, 1.1, 3.0);
  c.l = allow_l && uniform(g, 0.0, 1.0) < 0.5 ? 0.1 : 0.0;
  c.x_e = {uniform(g, -5.0, 5.0), uniform(g, -5.0, 5.0)};
  c.x_p = c.x_e + unit_at(uniform(g, -kPi, kPi)) * uniform(g, 0.5, 10.0);
  return c;
}

// Boundary point of D on the ray from x_e, limited to the part of the ray visible from x_e.
std::optional<Point2> generic_ray_boundary(const DominanceRegion& region, Point2 dir) {
  const World& w = region.world();
  const Point2 xe = region.evader();
  const double s_max = region.outer_radius() * (1.0 + 1e-9) + 1e-9;
  double s_hi = s_max * w.first_exit(xe, xe + dir * s_max).s;
  const auto f = [&](double s) { return region.phi(xe + dir * s); };
  if (!(f(0.0) > 0.0) || !(f(s_hi) <= 0.0)) return std::nullopt;
  return xe + dir * bisect_root(f, 0.0, s_hi);
}

}  // namespace

CheckReport finish_report(CheckReport r) {
  if (r.samples == 0 && !std::isfinite(r.worst_margin)) {
    r.worst_margin = 0.0;
    r.inconclusive = true;
  }
  r.pass = !(r.worst_margin < -r.tolerance);
  return r;
}

// ---------------------------------------------------------------------------

CheckReport check_oval_angle_inequality(Point2 x_p, Point2 x_e, double alpha, double l, std::size_t n,
                                        std::uint64_t seed) {
  const DominanceRegion region(World::free_plane(), x_p, x_e, alpha, l);
  Rng g(seed);
  Tracker t("oval_angle_inequality", 1e-9);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 x1 = ray_boundary_intersection(region, unit_at(uniform(g, -kPi, kPi)));
    const Point2 x2 = ray_boundary_intersection(region, unit_at(uniform(g, -kPi, kPi)));
    const double m = cos_between(x1 - x_p, x2 - x_p) - cos_between(x1 - x_e, x2 - x_e);
    t.add(m, [&] { return "x1=" + fmt(x1) + " x2=" + fmt(x2); });
  }
  // |d psi / d chi| by central differences, chi measured at x_e and psi at x_p from x_p - x_e.
  const Point2 base = x_p - x_e;
  const auto psi_at = [&](double chi) {
    const Point2 x = ray_boundary_intersection(region, rotated(base / norm(base), chi));
    return signed_angle(base, x - x_p);
  };
  const int m = 2000;
  const double h = 1e-4;
  double max_rate = 0.0, chi_worst = 0.0;
  for (int k = 0; k < m; ++k) {
    const double chi = -kPi + 2.0 * kPi * (k + 0.5) / m;
    const double rate = std::abs(wrap_angle(psi_at(chi + h) - psi_at(chi - h))) / (2.0 * h);
    if (rate > max_rate) {
      max_rate = rate;
      chi_worst = chi;
    }
  }
  t.rep.stats["max_abs_dpsi_dchi"] = max_rate;
  // The derivative bound enters on the same scale: fail iff |d psi/d chi| > 1 + 1e-6.
  t.add(1.0 + 1e-6 - max_rate - 1e-9, [&] { return "derivative at chi=" + fmt(chi_worst); });
  --t.rep.samples;
  return t.done();
}

// ---------------------------------------------------------------------------

std::vector<Point2> corner_boundary_samples(const World& world, Point2 x_p, Point2 x_e, double alpha,
                                            std::size_t n, std::uint64_t seed) {
  const FSet fset(x_p, x_e, alpha);
  Rng g(seed);
  std::vector<Point2> out;
  for (std::size_t attempt = 0; out.size() < n && attempt < 50 * n + 100; ++attempt) {
    const Point2 x = fset.ray_intersection(unit_at(uniform(g, -kPi, kPi)));
    if (world.contains(x) && world.visible(x_e, x)) out.push_back(x);
  }
  return out;
}

CheckReport check_gamma_star_cosine(const World& world, Point2 x_p, Point2 x_e, double alpha, std::size_t n,
                                    std::uint64_t seed) {
  if (!(norm(x_p) < alpha * norm(x_e))) throw StrategyInapplicable("gamma* cosine check: vertex inside closure");
  Rng g(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto xs = corner_boundary_samples(world, x_p, x_e, alpha, n, seed);
  Tracker t("gamma_star_cosine", 1e-9);
  std::size_t rejected = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Point2 x = xs[i];
    // A quarter of the inputs aim straight at x (the tight case).
    const Point2 u = (i % 4 == 0 && distance(x, x_e) > 0.0) ? normalized(x - x_e) : unit_at(uniform(g, -kPi, kPi));
    try {
      const Point2 ge = metric_gradients(world, x, x_e).grad2;
      const Point2 gp = metric_gradients(world, x, x_p).grad2;
      const Point2 up = gamma_star_corner(world, x_p, x_e, u, alpha).direction;
      const double m = dot(ge, u) - dot(gp, up);
      t.add(m, [&] { return "x=" + fmt(x) + " u_e=" + fmt(u); });
    } catch (const NonDifferentiable&) {
      ++rejected;
    }
  }
  t.rep.stats["rejected_nondifferentiable"] = static_cast<double>(rejected);
  return t.done();
}

CheckReport check_increment_positive(const World& world, Point2 x_p, Point2 x_e, double alpha, std::size_t n,
                                     std::uint64_t seed) {
  if (!(norm(x_p) < alpha * norm(x_e))) throw StrategyInapplicable("increment check: vertex inside closure");
  const auto xs = corner_boundary_samples(world, x_p, x_e, alpha, n, seed);
  Tracker t("increment_positive", 0.0);
  const bool pe_visible = world.visible(x_p, x_e);
  double counts[4] = {0, 0, 0, 0};
  std::size_t rejected = 0;
  MetricGradients pe;
  try {
    pe = metric_gradients(world, x_p, x_e);
  } catch (const NonDifferentiable&) {
    t.rep.stats["rejected_nondifferentiable"] = static_cast<double>(xs.size());
    t.rep.inconclusive = true;
    return t.done();
  }
  for (const Point2 x : xs) {
    try {
      const Point2 gx = metric_gradients(world, x, x_p).grad2;
      const double product = dot(pe.grad1, gx);
      const bool on_circle = world.visible(x, x_p);
      counts[(pe_visible ? 0 : 2) + (on_circle ? 0 : 1)] += 1.0;
      // Strict positivity: fail iff product < 1e-9.
      t.add(product - 1e-9, [&] { return "x=" + fmt(x) + " product=" + fmt(product); });
    } catch (const NonDifferentiable&) {
      ++rejected;
    }
  }
  t.rep.stats["case1_visible_circle"] = counts[0];
  t.rep.stats["case2_visible_oval"] = counts[1];
  t.rep.stats["case3_hidden_circle"] = counts[2];
  t.rep.stats["case4_hidden_oval"] = counts[3];
  t.rep.stats["rejected_nondifferentiable"] = static_cast<double>(rejected);
  return t.done();
}

// ---------------------------------------------------------------------------

CheckReport check_necessary_condition(const World& world, Point2 x_p, Point2 x_e, double alpha,
                                      const std::vector<std::pair<Point2, Point2>>& pairs) {
  const DominanceRegion region(world, x_p, x_e, alpha);
  Tracker t("necessary_condition", 1e-9);
  std::size_t rejected = 0;
  for (const auto& [c1, c2] : pairs) {
    try {
      const Point2 p1 = metric_gradients(world, c1, x_p).grad2, p2 = metric_gradients(world, c2, x_p).grad2;
      const Point2 e1 = metric_gradients(world, c1, x_e).grad2, e2 = metric_gradients(world, c2, x_e).grad2;
      const double v = dot(p1, p2) - dot(e1, e2);
      t.add(v, [&] { return "c1=" + fmt(c1) + " c2=" + fmt(c2); });
    } catch (const NonDifferentiable&) {
      ++rejected;
    }
  }
  t.rep.stats["rejected_nondifferentiable"] = static_cast<double>(rejected);
  t.rep.stats["min_value"] = t.rep.samples ? t.rep.worst_margin : 0.0;
  return t.done();
}

World Example5::world() const { return World::corner_wedge(theta0_deg * kDeg); }
DominanceRegion Example5::region() const { return DominanceRegion(world(), x_p, x_e, alpha); }

namespace {

const BoundaryArc& example5_arc_ab(const BoundaryResult& b) {
  if (b.arcs.size() != 3 || arc_type_name(b.arcs[0].curve) != "oval")
    throw DegenerateRegion("example: leading oval arc not found");
  return b.arcs[0];
}

}  // namespace

std::vector<std::pair<Point2, Point2>> example5_arc_ab_pairs(std::size_t n, std::uint64_t seed) {
  const Example5 ex;
  const DominanceRegion region = ex.region();
  const BoundaryResult b = boundary_arcs(region, 360);
  const BoundaryArc& ab = example5_arc_ab(b);
  const double lo = ab.param_lo + 1e-3, hi = ab.param_hi - 1e-3;
  Rng g(seed);
  std::vector<std::pair<Point2, Point2>> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({polar_boundary_point(region, uniform(g, lo, hi)), polar_boundary_point(region, uniform(g, lo, hi))});
  return out;
}

CheckReport check_counterexample_divergence(double arc_separation_deg) {
  const Example5 ex;
  const World w = ex.world();
  const DominanceRegion region = ex.region();
  const BoundaryArc& ab = example5_arc_ab(boundary_arcs(region, 360));
  const double mid = 0.5 * (ab.param_lo + ab.param_hi);
  const double half = 0.5 * arc_separation_deg * kDeg;
  const Point2 c1 = polar_boundary_point(region, mid - half);
  const Point2 c2 = polar_boundary_point(region, mid + half);

  Tracker t("counterexample_divergence", 0.0);
  const double dt = 1e-3;
  const GameState s0{0.0, ex.x_p, ex.x_e};
  EvaderController probe1(Waypoints{{{0.0, 0.0}, c1}, true}, w);
  EvaderController probe2(Waypoints{{{0.0, 0.0}, c2}, true}, w);
  const Point2 u1 = probe1(s0, dt).direction, u2 = probe2(s0, dt).direction;
  const double input_gap = norm(u1 - u2);
  const Point2 h1 = normalized(c1 - ex.x_p), h2 = normalized(c2 - ex.x_p);
  const double heading_gap_deg = std::acos(std::clamp(dot(h1, h2), -1.0, 1.0)) / kDeg;

  // The evader reaches C_i only through the vertex; the pursuer sees C_i directly.
  const bool paths_ok = shortest_path(w, ex.x_e, c1).waypoints.size() == 3 &&
                        shortest_path(w, ex.x_e, c2).waypoints.size() == 3 && w.visible(ex.x_p, c1) &&
                        w.visible(ex.x_p, c2);
  t.rep.stats["heading_gap_deg"] = heading_gap_deg;
  t.rep.stats["first_leg_input_gap"] = input_gap;
  t.rep.stats["paths_as_described"] = paths_ok ? 1.0 : 0.0;
  const auto wit = [&] {
    return "C1=" + fmt(c1) + " C2=" + fmt(c2) + " u1=" + fmt(u1) + " u2=" + fmt(u2);
  };
  t.add(heading_gap_deg - 1.0, wit);
  t.add(1e-12 - input_gap, wit);
  t.add(paths_ok ? 0.0 : -1.0, wit);
  return t.done();
}

CheckReport check_example5_structure() {
  const Example5 ex;
  const World w = ex.world();
  const DominanceRegion region = ex.region();
  const BoundaryResult b = boundary_arcs(region, 720);
  Tracker t("example5_structure", 1e-6);
  const std::vector<std::string> expected{"oval", "apollonius", "oval"};
  std::vector<std::string> got;
  for (const auto& a : b.arcs) got.push_back(arc_type_name(a.curve));
  t.rep.stats["arc_count"] = static_cast<double>(b.arcs.size());
  if (got != expected) {
    t.add(-kInf, [&] {
      std::string s = "arc types:";
      for (const auto& x : got) s += " " + x;
      return s;
    });
    return t.done();
  }
  const Point2 A = b.arcs[0].start, B = b.arcs[0].end, C = b.arcs[1].end, D = b.arcs[2].end;
  const double th0 = ex.theta0_deg * kDeg;
  const Point2 upper = unit_at(th0), lower = unit_at(-th0);
  const auto on_ray = [](Point2 x, Point2 dir) {
    // Distance from x to the ray {s dir : s >= 0}.
    const double s = dot(x, dir);
    return s >= 0.0 ? std::abs(cross(dir, x)) : norm(x);
  };
  const double err_a = on_ray(A, upper);
  const double err_b = on_ray(B, -normalized(ex.x_e));
  const double err_c = on_ray(C, -normalized(ex.x_p));
  const double err_d = on_ray(D, lower);
  const double phi0 = region.phi({0.0, 0.0});
  const double phi0_expected = std::sqrt(41.0) - 1.5 * std::sqrt(5.0);
  double residual = 0.0;
  for (const auto& a : b.arcs)
    for (const auto& p : a.points) residual = std::max(residual, std::abs(p.residual));
  t.rep.stats["A_edge_distance"] = err_a;
  t.rep.stats["B_line_distance"] = err_b;
  t.rep.stats["C_line_distance"] = err_c;
  t.rep.stats["D_edge_distance"] = err_d;
  t.rep.stats["phi_origin"] = phi0;
  t.rep.stats["max_residual"] = residual;
  const auto wit = [&] { return "A=" + fmt(A) + " B=" + fmt(B) + " C=" + fmt(C) + " D=" + fmt(D); };
  for (double e : {err_a, err_b, err_c, err_d}) t.add(-e, wit);
  t.add(-std::abs(phi0 - phi0_expected) * 1e3, wit);
  t.add(phi0 > 0.0 ? 0.0 : -kInf, wit);
  t.add(-residual * 1e2, wit);
  return t.done();
}

// ---------------------------------------------------------------------------

CheckReport check_boundary_evolution_identity(const World& world, double alpha, const Trajectory& tr,
                                              std::size_t samples, std::uint64_t seed, double tol) {
  Tracker t("boundary_evolution_identity", tol);
  Rng g(seed);
  const auto& rows = tr.rows;
  std::size_t rejected = 0;
  if (rows.size() < 3) return t.done();
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, rows.size() - 3)(g);
    const auto& a = rows[i];
    const auto& b = rows[i + 1];
    const double dtau = b.t - a.t;
    if (!(dtau > 0.0) || (a.flags & (kPursuerSlid | kEvaderSlid))) {
      ++rejected;
      continue;
    }
    try {
      const DominanceRegion now(world, a.x_p, a.x_e, alpha);
      const DominanceRegion next(world, b.x_p, b.x_e, alpha);
      const auto x = generic_ray_boundary(now, unit_at(uniform(g, -kPi, kPi)));
      if (!x) {
        ++rejected;
        continue;
      }
      const double lhs = (next.phi(*x) - now.phi(*x)) / dtau;
      const Point2 gp = metric_gradients(world, *x, a.x_p).grad2;
      const Point2 ge = metric_gradients(world, *x, a.x_e).grad2;
      const double rhs = dot(gp, a.u_p * alpha) - alpha * dot(ge, a.u_e);
      t.add(-std::abs(lhs - rhs), [&] { return "t=" + fmt(a.t) + " x=" + fmt(*x); });
    } catch (const NonDifferentiable&) {
      ++rejected;
    }
  }
  t.rep.stats["rejected"] = static_cast<double>(rejected);
  return t.done();
}

// ---------------------------------------------------------------------------

namespace {

bool shape_contains(const TargetShape& s, const DominanceRegion& region, Point2 x) {
  if (const auto* h = std::get_if<HalfPlane>(&s)) return dot(h->normal, x) >= h->offset;
  if (const auto* d = std::get_if<Disk>(&s)) return distance(x, d->center) <= d->radius;
  if (const auto* p = std::get_if<PolygonTarget>(&s)) {
    Polygon poly{p->vertices};
    if (point_in_polygon(poly, x)) return true;
    for (std::size_t i = 0; i < p->vertices.size(); ++i) {
      const Point2 a = p->vertices[i], b = p->vertices[(i + 1) % p->vertices.size()];
      if (distance(x, closest_on_segment(x, a, b)) <= kBoundaryTol) return true;
    }
    return false;
  }
  return region.world().contains(x) && region.phi(x) < 0.0;
}

struct Box {
  Point2 lo, hi;
};

std::optional<Box> shape_box(const TargetShape& s) {
  if (const auto* d = std::get_if<Disk>(&s))
    return Box{d->center - Point2{d->radius, d->radius}, d->center + Point2{d->radius, d->radius}};
  if (const auto* p = std::get_if<PolygonTarget>(&s)) {
    Box b{p->vertices.front(), p->vertices.front()};
    for (Point2 v : p->vertices) {
      b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
      b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
    }
    return b;
  }
  return std::nullopt;
}

}  // namespace

bool target_contains(const TargetRegion& target, const DominanceRegion& region, Point2 x) {
  for (const auto& s : target.parts)
    if (shape_contains(s, region, x)) return true;
  return false;
}

std::string verdict_name(DefenseVerdict v) {
  switch (v) {
    case DefenseVerdict::GuaranteedDefense: return "GuaranteedDefense";
    case DefenseVerdict::NotCertified: return "NotCertified";
    case DefenseVerdict::GuaranteedBreachFreePlane: return "GuaranteedBreachFreePlane";
  }
  return "NotCertified";
}

DefenseResult defense_decision(const World& world, Point2 x_p0, Point2 x_e0, double alpha, const TargetRegion& target) {
  if (target.parts.empty()) throw DomainError("defense_decision: empty target");
  const DominanceRegion region(world, x_p0, x_e0, alpha);
  if (target_contains(target, region, x_e0)) throw DomainError("defense_decision: evader starts inside the target");

  // phi > 0 only within outer_radius of x_e.
  const double R = region.outer_radius() * 1.01 + 1e-9;
  const Box reach{x_e0 - Point2{R, R}, x_e0 + Point2{R, R}};
  DefenseResult res;
  res.max_phi = -kInf;
  const auto value = [&](const TargetShape& s, Point2 x) {
    if (!world.contains(x) || !shape_contains(s, region, x)) return -kInf;
    return region.phi(x);
  };
  for (const auto& shape : target.parts) {
    // Bounded shapes are searched whole; unbounded ones only where phi can be positive.
    const Box box = shape_box(shape).value_or(reach);
    const int n = 128;
    const Point2 cell{(box.hi.x - box.lo.x) / n, (box.hi.y - box.lo.y) / n};
    double best = -kInf;
    Point2 arg;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const Point2 x = box.lo + Point2{cell.x * i, cell.y * j};
        const double v = value(shape, x);
        if (v > best) {
          best = v;
          arg = x;
        }
      }
    if (const auto* d = std::get_if<Disk>(&shape)) {
      const double v = value(shape, d->center);
      if (v > best) {
        best = v;
        arg = d->center;
      }
    }
    if (best == -kInf) continue;
    // Coordinate-wise golden-section refinement around the best node.
    for (int round = 0; round < 4; ++round) {
      const auto [bx, vx] = golden_max([&](double x) { return value(shape, {x, arg.y}); }, arg.x - cell.x, arg.x + cell.x, 60);
      if (vx > best) {
        best = vx;
        arg.x = bx;
      }
      const auto [by, vy] = golden_max([&](double y) { return value(shape, {arg.x, y}); }, arg.y - cell.y, arg.y + cell.y, 60);
      if (vy > best) {
        best = vy;
        arg.y = by;
      }
    }
    if (best > res.max_phi) {
      res.max_phi = best;
      res.argmax = arg;
    }
  }
  res.intersects = res.max_phi > 1e-9;
  if (world.is_free_plane()) {
    res.verdict = res.intersects ? DefenseVerdict::GuaranteedBreachFreePlane : DefenseVerdict::GuaranteedDefense;
    res.reason = res.intersects ? "dominance region meets the target; the evader can reach it first"
                                : "dominance region misses the target; delta* keeps the evader inside it";
  } else if (res.intersects) {
    res.verdict = DefenseVerdict::NotCertified;
    res.reason = "dominance region meets the target in a world with obstacles";
  } else if (world.is_corner() && norm(x_p0) < alpha * norm(x_e0)) {
    res.verdict = DefenseVerdict::GuaranteedDefense;
    res.reason = "dominance region misses the target and gamma* keeps the evader inside it";
  } else {
    res.verdict = DefenseVerdict::NotCertified;
    res.reason = "dominance region misses the target, but no strategy is known to keep the evader inside it";
  }
  return res;
}

// ---------------------------------------------------------------------------

CheckReport check_metric_axioms(const World& world, std::size_t n, std::uint64_t seed) {
  Rng g(seed);
  Tracker t("metric_axioms." + world.kind_name(), 1e-9);
  double max_asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = random_point(world, g, 8.0), b = random_point(world, g, 8.0), c = random_point(world, g, 8.0);
    const double ab = shortest_distance(world, a, b), ba = shortest_distance(world, b, a);
    const double bc = shortest_distance(world, b, c), ac = shortest_distance(world, a, c);
    max_asym = std::max(max_asym, std::abs(ab - ba));
    const double m = ab != ba ? -kInf : ab + bc - ac;
    t.add(m, [&] { return "a=" + fmt(a) + " b=" + fmt(b) + " c=" + fmt(c); });
  }
  t.rep.stats["max_asymmetry"] = max_asym;
  return t.done();
}

CheckReport check_corner_closed_form(double theta0, std::size_t n, std::uint64_t seed) {
  Rng g(seed);
  const World w = World::corner_wedge(theta0);
  Tracker t("corner_closed_form", 1e-12);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = random_corner_point(theta0, g, 0.0, 10.0), b = random_corner_point(theta0, g, 0.0, 10.0);
    const double err = std::abs(corner_distance_closed_form(theta0, a, b) - shortest_distance(w, a, b));
    t.add(-err, [&] { return "a=" + fmt(a) + " b=" + fmt(b); });
  }
  return t.done();
}

CheckReport check_gradients(const World& world, std::size_t n, std::uint64_t seed) {
  Rng g(seed);
  Tracker t("gradients." + world.kind_name(), 1e-5);
  const double h = 1e-6;
  double max_norm_err = 0.0, max_fd_err = 0.0;
  std::size_t skipped = 0;
  // Away from non-smooth loci: clear of obstacle edges and with a clear runner-up route.
  const auto smooth_at = [&](Point2 from, Point2 at) {
    if (world.has_obstacles() && world.distance_to_obstacles(at) < 1e-3) return false;
    const auto hops = DistanceField(world, from).hops(at);
    if (hops.empty()) return false;
    for (std::size_t k = 1; k < hops.size(); ++k)
      if (hops[k].length - hops[0].length < 1e-4 && distance(hops[k].from, hops[0].from) > 0.0 &&
          1.0 - cos_between(at - hops[k].from, at - hops[0].from) > 1e-12)
        return false;
    return true;
  };
  while (t.rep.samples < n) {
    const Point2 a = random_point(world, g, 8.0), b = random_point(world, g, 8.0);
    if (distance(a, b) < 1e-2 || !smooth_at(a, b) || !smooth_at(b, a)) {
      ++skipped;
      continue;
    }
    MetricGradients gr;
    try {
      gr = metric_gradients(world, a, b);
    } catch (const NonDifferentiable&) {
      ++skipped;
      continue;
    }
    const auto d = [&](Point2 p, Point2 q) { return shortest_distance(world, p, q); };
    const Point2 fd1{(d(a + Point2{h, 0}, b) - d(a - Point2{h, 0}, b)) / (2 * h),
                     (d(a + Point2{0, h}, b) - d(a - Point2{0, h}, b)) / (2 * h)};
    const Point2 fd2{(d(a, b + Point2{h, 0}) - d(a, b - Point2{h, 0})) / (2 * h),
                     (d(a, b + Point2{0, h}) - d(a, b - Point2{0, h})) / (2 * h)};
    const double fd_err = std::max(norm(fd1 - gr.grad1), norm(fd2 - gr.grad2));
    const double norm_err = std::max(std::abs(norm(gr.grad1) - 1.0), std::abs(norm(gr.grad2) - 1.0));
    max_fd_err = std::max(max_fd_err, fd_err);
    max_norm_err = std::max(max_norm_err, norm_err);
    // Unit-norm error enters rescaled so that 1e-9 maps onto the 1e-5 tolerance.
    t.add(-std::max(fd_err, norm_err * 1e4), [&] { return "a=" + fmt(a) + " b=" + fmt(b); });
  }
  t.rep.stats["max_fd_error"] = max_fd_err;
  t.rep.stats["max_unit_norm_error"] = max_norm_err;
  t.rep.stats["skipped"] = static_cast<double>(skipped);
  return t.done();
}

CheckReport check_eta_m_tangent(std::size_t n, std::uint64_t seed) {
  Rng g(seed);
  Tracker t("eta_m_tangent", 1e-8);
  for (std::size_t i = 0; i < n; ++i) {
    const double alpha = uniform(g, 1.1, 3.0);
    const Point2 x_e = unit_at(uniform(g, -kPi, kPi)) * uniform(g, 0.5, 6.0);
    const Point2 x_p = unit_at(uniform(g, -kPi, kPi)) * uniform(g, 0.0, alpha * norm(x_e) * 0.999);
    const double closed = eta_m(x_p, x_e, alpha);
    // Oval |x| + |x_p| - alpha |x - x_e| = 0 sampled by rays from x_e; largest bearing offset from x_e.
    const double rp = norm(x_p), te = std::atan2(x_e.y, x_e.x);
    const double s_hi = (norm(x_e) + rp) / (alpha - 1.0) * 1.01 + 1.0;
    const auto offset_at = [&](double chi) {
      const Point2 u = unit_at(chi);
      const double s = bisect_root([&](double q) {
        const Point2 x = x_e + u * q;
        return norm(x) + rp - alpha * distance(x, x_e);
      }, 0.0, s_hi);
      const Point2 x = x_e + u * s;
      return std::abs(wrap_angle(std::atan2(x.y, x.x) - te));
    };
    const int m = 720;
    double best = -1.0, best_chi = 0.0;
    for (int k = 0; k < m; ++k) {
      const double chi = -kPi + 2.0 * kPi * k / m;
      const double v = offset_at(chi);
      if (v > best) {
        best = v;
        best_chi = chi;
      }
    }
    const double step = 2.0 * kPi / m;
    const double numeric = golden_max(offset_at, best_chi - step, best_chi + step, 100).second;
    t.add(-std::abs(std::max(numeric, best) - closed), [&] {
      return "x_p=" + fmt(x_p) + " x_e=" + fmt(x_e) + " alpha=" + fmt(alpha);
    });
  }
  return t.done();
}

CheckReport check_path_waypoints(const World& world, std::size_t n, std::uint64_t seed) {
  Rng g(seed);
  Tracker t("path_waypoints." + world.kind_name(), 0.0);
  const auto verts = world.vertices();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = random_point(world, g, 8.0), b = random_point(world, g, 8.0);
    const ShortestPath p = shortest_path(world, a, b);
    bool ok = p.waypoints.front() == a && p.waypoints.back() == b;
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < p.waypoints.size(); ++k) {
      len += distance(p.waypoints[k], p.waypoints[k + 1]);
      ok = ok && world.visible(p.waypoints[k], p.waypoints[k + 1]);
    }
    for (std::size_t k = 1; k + 1 < p.waypoints.size(); ++k)
      ok = ok && std::find(verts.begin(), verts.end(), p.waypoints[k]) != verts.end();
    ok = ok && std::abs(len - p.length) <= 1e-9 * (1.0 + len);
    t.add(ok ? 0.0 : -1.0, [&] { return "a=" + fmt(a) + " b=" + fmt(b); });
  }
  return t.done();
}

// ---------------------------------------------------------------------------

namespace {

Scripted random_scripted(Rng& g, double horizon) {
  Scripted s;
  double t = 0.0;
  while (t < horizon) {
    s.switch_times.push_back(t);
    s.headings.push_back(unit_at(uniform(g, -kPi, kPi)));
    t += uniform(g, 0.05, 2.0);
  }
  return s;
}

struct EpisodeTally {
  Tracker capture{"capture_bound", 0.0};
  Tracker contain{"containment", 1.0};
  Tracker rate{"closing_rate", 1.0};

  void add(const SimConfig& c, const SimResult& r, const std::string& label) {
    const double limit = r.capture_bound * 1.01 + 2.0 * c.dt;
    const auto* cap = std::get_if<Captured>(&r.outcome);
    const double m = cap ? limit - cap->t_f : -kInf;
    capture.add(m, [&] {
      return label + " outcome=" + outcome_name(r.outcome) + " t_f=" + (cap ? fmt(cap->t_f) : "-") + " limit=" + fmt(limit);
    });
    // Ratios to the per-episode tolerance: fail iff the ratio exceeds 1.
    contain.add(-r.containment.worst_ratio, [&] { return label + " t=" + fmt(r.containment.t_worst); });
    rate.add(-r.closing_rate.worst_ratio, [&] { return label + " t=" + fmt(r.closing_rate.t_worst); });
  }
};

std::vector<CheckReport> tally_reports(EpisodeTally& tally, const std::string& prefix) {
  tally.capture.rep.id = prefix + ".capture_bound";
  tally.contain.rep.id = prefix + ".containment";
  tally.rate.rep.id = prefix + ".closing_rate";
  return {tally.capture.done(), tally.contain.done(), tally.rate.done()};
}

}  // namespace

std::vector<CheckReport> check_free_plane_guarantee(const SweepOptions& opt, std::uint64_t seed) {
  Rng g(seed);
  EpisodeTally tally;
  for (std::size_t i = 0; i < opt.configs; ++i) {
    const FreeConfig fc = random_free_config(g);
    const double bound = capture_time_bound(distance(fc.x_p, fc.x_e), fc.l, fc.alpha);
    for (std::size_t j = 0; j < opt.policies; ++j) {
      SimConfig c;
      c.world = World::free_plane();
      c.alpha = fc.alpha;
      c.capture_radius = fc.l;
      c.dt = opt.dt;
      c.t_max = bound * 1.01 + 2.0 * opt.dt + 1.0;
      c.initial = {0.0, fc.x_p, fc.x_e};
      c.pursuer = FreeDeltaStar{};
      c.evader = random_scripted(g, c.t_max);
      const SimResult r = run(c);
      tally.add(c, r, "config " + std::to_string(i) + " policy " + std::to_string(j) + " x_p=" + fmt(fc.x_p) +
                          " x_e=" + fmt(fc.x_e) + " alpha=" + fmt(fc.alpha) + " l=" + fmt(fc.l));
    }
  }
  return tally_reports(tally, "free_plane");
}

std::vector<CheckReport> check_corner_guarantee(const SweepOptions& opt, std::uint64_t seed) {
  Rng g(seed);
  EpisodeTally tally;
  for (std::size_t i = 0; i < opt.configs; ++i) {
    const CornerConfig cc = random_corner_config(g);
    const DominanceRegion region(cc.world, cc.x_p, cc.x_e, cc.alpha);
    // Probe targets just beyond sampled boundary points, preferring the oval piece.
    const auto xs = corner_boundary_samples(cc.world, cc.x_p, cc.x_e, cc.alpha, 64, g());
    std::vector<Point2> oval, circle;
    for (Point2 x : xs) (cc.world.visible(x, cc.x_p) ? circle : oval).push_back(x);
    for (std::size_t j = 0; j < opt.policies; ++j) {
      const auto& pool = (j % 2 == 0 && !oval.empty()) ? oval : (circle.empty() ? oval : circle);
      if (pool.empty()) break;
      const Point2 x = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(g)];
      Point2 target = cc.x_e + (x - cc.x_e) * uniform(g, 1.05, 1.5);
      if (!cc.world.contains(target) || region.phi(target) > 0.0) target = x;
      SimConfig c;
      c.world = cc.world;
      c.alpha = cc.alpha;
      c.dt = opt.dt;
      c.t_max = region.separation() / (cc.alpha - 1.0) * 1.01 + 2.0 * opt.dt + 1.0;
      c.initial = {0.0, cc.x_p, cc.x_e};
      c.pursuer = CornerGammaStar{};
      c.evader = BoundaryProbe{target};
      const SimResult r = run(c);
      tally.add(c, r, "config " + std::to_string(i) + " probe " + fmt(target) + " theta0=" +
                          fmt(cc.world.theta0()) + " x_p=" + fmt(cc.x_p) + " x_e=" + fmt(cc.x_e) +
                          " alpha=" + fmt(cc.alpha));
    }
  }
  return tally_reports(tally, "corner");
}

// ---------------------------------------------------------------------------

namespace {

World polygon_test_world() {
  return World::polygons({Polygon{{{2.0, -1.0}, {4.0, -1.0}, {4.0, 1.0}, {2.0, 1.0}}},
                          Polygon{{{-3.0, 2.0}, {-1.0, 2.0}, {-2.0, 4.0}}}});
}

std::vector<CheckReport> free_plane_suite(std::uint64_t seed) {
  Rng g(seed);
  std::vector<CheckReport> parts;
  for (int i = 0; i < 5; ++i) {
    const FreeConfig c = random_free_config(g);
    parts.push_back(check_oval_angle_inequality(c.x_p, c.x_e, c.alpha, c.l, 2000, g()));
  }
  std::vector<CheckReport> out{merge("free_plane.oval_angle_inequality", parts)};
  for (auto& r : check_free_plane_guarantee({10, 5, 1e-3}, g())) out.push_back(std::move(r));
  return out;
}

std::vector<CheckReport> corner_suite(std::uint64_t seed) {
  Rng g(seed);
  std::vector<CheckReport> cos_parts, inc_parts;
  // Fixed configurations reach the oval piece and the mutually hidden start.
  std::vector<CornerConfig> configs{
      {World::corner_wedge(5.0 * kDeg), from_polar(2.0, 60.0 * kDeg), from_polar(3.0, 200.0 * kDeg), 2.0},
      {World::corner_wedge(19.0 * kDeg), from_polar(3.25, 34.0 * kDeg), from_polar(2.7, 248.0 * kDeg), 1.5}};
  for (int i = 0; i < 3; ++i) configs.push_back(random_corner_config(g));
  for (const auto& c : configs) {
    cos_parts.push_back(check_gamma_star_cosine(c.world, c.x_p, c.x_e, c.alpha, 2000, g()));
    inc_parts.push_back(check_increment_positive(c.world, c.x_p, c.x_e, c.alpha, 2000, g()));
  }
  CheckReport inc = merge("corner.increment_positive", inc_parts);
  for (const char* k : {"case1_visible_circle", "case2_visible_oval", "case3_hidden_circle", "case4_hidden_oval"})
    if (inc.stats[k] == 0.0) inc.inconclusive = true;
  std::vector<CheckReport> out{merge("corner.gamma_star_cosine", cos_parts), inc};
  for (auto& r : check_corner_guarantee({10, 5, 1e-3}, g())) out.push_back(std::move(r));
  return out;
}

std::vector<CheckReport> counterexample_suite(std::uint64_t seed) {
  const Example5 ex;
  CheckReport nc = check_necessary_condition(ex.world(), ex.x_p, ex.x_e, ex.alpha, example5_arc_ab_pairs(2000, seed));
  // On the example the condition must fail.
  CheckReport violated = nc;
  violated.id = "counterexample.necessary_condition_violated";
  violated.tolerance = 1e-9;
  violated.worst_margin = -nc.worst_margin - violated.tolerance;
  violated.pass = nc.samples > 0 && !nc.pass;
  CheckReport div = check_counterexample_divergence();
  div.id = "counterexample." + div.id;
  CheckReport st = check_example5_structure();
  st.id = "counterexample." + st.id;
  return {violated, div, st};
}

std::vector<CheckReport> metric_suite(std::uint64_t seed) {
  Rng g(seed);
  const std::vector<World> worlds{World::free_plane(), Example5{}.world(), World::corner_wedge(20.0 * kDeg),
                                  polygon_test_world()};
  std::vector<CheckReport> out;
  for (const auto& w : worlds) out.push_back(check_metric_axioms(w, 500, g()));
  out.push_back(check_corner_closed_form(5.0 * kDeg, 2000, g()));
  out.push_back(check_corner_closed_form(30.0 * kDeg, 2000, g()));
  for (const auto& w : worlds) out.push_back(check_gradients(w, 300, g()));
  out.push_back(check_eta_m_tangent(50, g()));
  for (std::size_t i = 1; i < worlds.size(); ++i) out.push_back(check_path_waypoints(worlds[i], 300, g()));
  for (auto& r : out) r.id = "metric." + r.id;
  return out;
}

}  // namespace

std::vector<std::string> suite_names() { return {"free-plane", "corner", "counterexample", "metric", "all"}; }

std::vector<CheckReport> run_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "free-plane") return free_plane_suite(seed);
  if (suite == "corner") return corner_suite(seed);
  if (suite == "counterexample") return counterexample_suite(seed);
  if (suite == "metric") return metric_suite(seed);
  if (suite == "all") {
    std::vector<CheckReport> out;
    for (const auto& name : {"free-plane", "corner", "counterexample", "metric"})
      for (auto& r : run_suite(name, seed)) out.push_back(std::move(r));
    return out;
  }
  throw DomainError("unknown suite '" + suite + "'");
}

}  // namespace pursuit
