#include "pursuit/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>

namespace pursuit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
  Point2 a, b;
};

}  // namespace

struct World::Data {
  Kind kind;
  std::vector<Point2> vertices;
  std::vector<Edge> edges;
  std::vector<char> visibility;
  // Corner wedge edge directions: upper (theta0) and lower (-theta0).
  Point2 upper, lower;
};

Point2 normalized(Point2 p) {
  const double n = norm(p);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero or non-finite vector");
  return p / n;
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Point2 closest_on_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return a;
  const double s = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return a + d * s;
}

bool point_in_polygon(const Polygon& poly, Point2 p) {
  bool inside = false;
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double xc = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

namespace {

double polygon_boundary_distance(const Polygon& poly, Point2 p) {
  double best = kInf;
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
    best = std::min(best, distance(p, closest_on_segment(p, v[j], v[i])));
  return best;
}

bool strictly_in_polygon(const Polygon& poly, Point2 p) {
  return point_in_polygon(poly, p) && polygon_boundary_distance(poly, p) > kBoundaryTol;
}

bool segments_properly_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool polygon_is_simple(const Polygon& poly) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_properly_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

double signed_area(const Polygon& poly) {
  double a = 0.0;
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) a += cross(v[j], v[i]);
  return 0.5 * a;
}

// Parameters along [a, b] where the segment meets edge [c, d], appended to out.
void edge_hits(Point2 a, Point2 b, Point2 c, Point2 d, std::vector<double>& out) {
  const Point2 r = b - a, q = d - c;
  const double rr = dot(r, r);
  if (rr == 0.0) return;
  const double denom = cross(r, q);
  const double scale = std::sqrt(rr * dot(q, q));
  constexpr double eps = 1e-12;
  if (std::abs(denom) > 1e-14 * scale) {
    const double s = cross(c - a, q) / denom;
    const double u = cross(c - a, r) / denom;
    if (s >= -eps && s <= 1.0 + eps && u >= -eps && u <= 1.0 + eps) out.push_back(std::clamp(s, 0.0, 1.0));
    return;
  }
  // Parallel: only collinear overlaps matter.
  if (std::abs(cross(c - a, r)) > 1e-12 * std::sqrt(rr)) return;
  for (Point2 e : {c, d}) {
    const double s = dot(e - a, r) / rr;
    if (s >= -eps && s <= 1.0 + eps) out.push_back(std::clamp(s, 0.0, 1.0));
  }
}

}  // namespace

World::World() : World(free_plane()) {}

World::World(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

World World::free_plane() {
  auto d = std::make_shared<Data>();
  d->kind = FreePlane{};
  return World(std::move(d));
}

World World::corner_wedge(double theta0) {
  if (!(theta0 > 0.0 && theta0 < kPi / 2.0))
    throw DomainError("corner half-angle theta0 must lie in (0, pi/2)");
  auto d = std::make_shared<Data>();
  d->kind = CornerWedge{theta0};
  d->vertices = {Point2{0.0, 0.0}};
  d->upper = {std::cos(theta0), std::sin(theta0)};
  d->lower = {std::cos(theta0), -std::sin(theta0)};
  d->visibility = {1};
  return World(std::move(d));
}

World World::polygons(std::vector<Polygon> obstacles) {
  for (auto& poly : obstacles) {
    if (poly.vertices.size() < 3) throw DomainError("polygon needs at least 3 vertices");
    for (Point2 p : poly.vertices)
      if (!is_finite(p)) throw DomainError("polygon vertex is not finite");
    const double area = signed_area(poly);
    if (std::abs(area) < 1e-12) throw DomainError("degenerate polygon (zero area)");
    if (!polygon_is_simple(poly)) throw DomainError("polygon is not simple");
    if (area < 0.0) std::reverse(poly.vertices.begin(), poly.vertices.end());
  }
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    for (std::size_t j = i + 1; j < obstacles.size(); ++j) {
      const auto& pi = obstacles[i].vertices;
      const auto& pj = obstacles[j].vertices;
      bool touch = point_in_polygon(obstacles[i], pj[0]) || point_in_polygon(obstacles[j], pi[0]);
      for (std::size_t a = 0; a < pi.size() && !touch; ++a)
        for (std::size_t b = 0; b < pj.size() && !touch; ++b) {
          const Point2 p0 = pi[a], p1 = pi[(a + 1) % pi.size()];
          const Point2 q0 = pj[b], q1 = pj[(b + 1) % pj.size()];
          std::vector<double> hits;
          edge_hits(p0, p1, q0, q1, hits);
          touch = !hits.empty();
        }
      if (touch) throw DomainError("obstacle polygons must be pairwise disjoint");
    }
  }

  auto d = std::make_shared<Data>();
  for (const auto& poly : obstacles) {
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      d->vertices.push_back(v[i]);
      d->edges.push_back({v[i], v[(i + 1) % v.size()]});
    }
  }
  d->kind = Polygons{std::move(obstacles)};
  World partial(d);
  const std::size_t n = d->vertices.size();
  std::vector<char> vis(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    vis[i * n + i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      const char v = partial.segment_clear(d->vertices[i], d->vertices[j]) ? 1 : 0;
      vis[i * n + j] = vis[j * n + i] = v;
    }
  }
  d->visibility = std::move(vis);
  return partial;
}

const World::Kind& World::kind() const { return data_->kind; }
bool World::is_free_plane() const { return std::holds_alternative<FreePlane>(data_->kind); }
bool World::is_corner() const { return std::holds_alternative<CornerWedge>(data_->kind); }
bool World::is_polygons() const { return std::holds_alternative<Polygons>(data_->kind); }

double World::theta0() const {
  if (const auto* c = std::get_if<CornerWedge>(&data_->kind)) return c->theta0;
  throw DomainError("theta0 is only defined for corner worlds");
}

std::string World::kind_name() const {
  if (is_free_plane()) return "free_plane";
  if (is_corner()) return "corner";
  return "polygons";
}

std::span<const Point2> World::vertices() const { return data_->vertices; }
const std::vector<char>& World::vertex_visibility() const { return data_->visibility; }

bool World::contains(Point2 x) const {
  if (!is_finite(x)) return false;
  if (is_free_plane()) return true;
  if (is_corner()) {
    return !(cross(data_->upper, x) < -kBoundaryTol && cross(data_->lower, x) > kBoundaryTol);
  }
  for (const auto& poly : std::get<Polygons>(data_->kind).obstacles)
    if (strictly_in_polygon(poly, x)) return false;
  return true;
}

PolarPoint World::to_polar(Point2 x) const {
  double theta = std::atan2(x.y, x.x);
  if (theta < 0.0) theta += 2.0 * kPi;
  if (const auto* c = std::get_if<CornerWedge>(&data_->kind)) {
    // Boundary points may round to just inside the excluded wedge.
    if (theta < c->theta0 || theta > 2.0 * kPi - c->theta0)
      theta = (theta < kPi) ? c->theta0 : 2.0 * kPi - c->theta0;
  }
  return {norm(x), theta};
}

World::Exit World::first_exit(Point2 a, Point2 b) const {
  Exit exit;
  if (is_free_plane()) return exit;
  if (is_corner()) {
    // Open wedge = {cross(upper, p) < 0} and {cross(lower, p) > 0}; both linear in s.
    struct Range {
      double lo = 0.0, hi = 1.0;
    };
    // Range of s in [0, 1] where sign * f(s) > tol, f(s) = f0 + s (f1 - f0).
    const auto solve = [](double f0, double f1, double sign) {
      Range r;
      f0 *= sign;
      f1 *= sign;
      const double k = f1 - f0;
      if (k == 0.0) {
        if (!(f0 > kBoundaryTol)) r.hi = -1.0;
        return r;
      }
      const double root = (kBoundaryTol - f0) / k;
      if (k > 0.0) r.lo = std::max(0.0, root);
      else r.hi = std::min(1.0, root);
      return r;
    };
    const Range ru = solve(cross(data_->upper, a), cross(data_->upper, b), -1.0);
    const Range rl = solve(cross(data_->lower, a), cross(data_->lower, b), 1.0);
    const double lo = std::max(ru.lo, rl.lo), hi = std::min(ru.hi, rl.hi);
    if (hi - lo > 1e-15) {
      exit.s = lo;
      const Point2 t = ru.lo >= rl.lo ? data_->upper : data_->lower;
      exit.edge_tangent = t;
      exit.edge_a = Point2{0.0, 0.0};
      exit.edge_b = t * (2.0 * (norm(a) + norm(b)) + 1.0);
    }
    return exit;
  }

  std::vector<double> params{0.0, 1.0};
  std::vector<std::size_t> owner{0, 0};
  for (std::size_t e = 0; e < data_->edges.size(); ++e) {
    edge_hits(a, b, data_->edges[e].a, data_->edges[e].b, params);
    owner.resize(params.size(), e);
  }
  std::vector<std::size_t> order(params.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return params[i] < params[j]; });
  const auto& obstacles = std::get<Polygons>(data_->kind).obstacles;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const double s0 = params[order[k]], s1 = params[order[k + 1]];
    if (s1 - s0 < 1e-13) continue;
    const Point2 mid = a + (b - a) * (0.5 * (s0 + s1));
    for (const auto& poly : obstacles) {
      if (strictly_in_polygon(poly, mid)) {
        exit.s = s0;
        // The edge that produced s0 (or any edge hit at the same parameter).
        std::size_t best_edge = owner[order[k]];
        if (order[k] < 2) {
          for (std::size_t m = 2; m < params.size(); ++m)
            if (std::abs(params[m] - s0) < 1e-12) best_edge = owner[m];
        }
        const Edge& e = data_->edges[best_edge];
        exit.edge_a = e.a;
        exit.edge_b = e.b;
        exit.edge_tangent = normalized(e.b - e.a);
        return exit;
      }
    }
  }
  return exit;
}

bool World::segment_clear(Point2 a, Point2 b) const {
  if (is_free_plane()) return true;
  return !first_exit(a, b).edge_tangent.has_value();
}

bool World::visible(Point2 a, Point2 b) const {
  if (!contains(a) || !contains(b)) throw OutsideWorld("visible: point outside the playable region");
  return segment_clear(a, b);
}

double World::distance_to_obstacles(Point2 x) const {
  if (is_free_plane()) return kInf;
  if (is_corner()) {
    const double big = 2.0 * norm(x) + 1.0;
    return std::min(distance(x, closest_on_segment(x, {0, 0}, data_->upper * big)),
                    distance(x, closest_on_segment(x, {0, 0}, data_->lower * big)));
  }
  double best = kInf;
  for (const auto& e : data_->edges) best = std::min(best, distance(x, closest_on_segment(x, e.a, e.b)));
  return best;
}

DistanceField::DistanceField(const World& world, Point2 source) : world_(world), source_(source) {
  if (!world.contains(source)) throw OutsideWorld("distance field source outside the playable region");
  const auto verts = world.vertices();
  const std::size_t n = verts.size();
  dist_.assign(n, kInf);
  prev_.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (world.segment_clear(source, verts[i])) dist_[i] = pursuit::distance(source, verts[i]);
  // Dense Dijkstra; obstacle vertex counts are small.
  const auto& vis = world.vertex_visibility();
  std::vector<char> done(n, 0);
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && dist_[i] < kInf && (u == n || dist_[i] < dist_[u])) u = i;
    if (u == n) break;
    done[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v] || !vis[u * n + v]) continue;
      const double cand = dist_[u] + pursuit::distance(verts[u], verts[v]);
      if (cand < dist_[v]) {
        dist_[v] = cand;
        prev_[v] = static_cast<int>(u);
      }
    }
  }
}

std::vector<DistanceField::Hop> DistanceField::hops(Point2 x) const {
  std::vector<Hop> out;
  if (world_.segment_clear(source_, x)) out.push_back({pursuit::distance(source_, x), source_});
  const auto verts = world_.vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (dist_[i] == kInf) continue;
    if (world_.segment_clear(verts[i], x)) out.push_back({dist_[i] + pursuit::distance(verts[i], x), verts[i]});
  }
  std::sort(out.begin(), out.end(), [](const Hop& a, const Hop& b) { return a.length < b.length; });
  return out;
}

double DistanceField::distance(Point2 x) const {
  // Candidates in increasing length; the first visible one is optimal.
  const auto verts = world_.vertices();
  const double direct = pursuit::distance(source_, x);
  if (verts.empty()) return direct;
  struct Cand {
    double len;
    int v;
  };
  std::vector<Cand> cands;
  cands.reserve(verts.size() + 1);
  cands.push_back({direct, -1});
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (dist_[i] < kInf) cands.push_back({dist_[i] + pursuit::distance(verts[i], x), static_cast<int>(i)});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.len < b.len; });
  for (const auto& c : cands) {
    const Point2 from = c.v < 0 ? source_ : verts[static_cast<std::size_t>(c.v)];
    if (world_.segment_clear(from, x)) return c.len;
  }
  return kInf;
}

ShortestPath DistanceField::path_to(Point2 x) const {
  if (!world_.contains(x)) throw OutsideWorld("shortest path target outside the playable region");
  const auto verts = world_.vertices();
  double best = kInf;
  int via = -2;
  if (world_.segment_clear(source_, x)) {
    best = pursuit::distance(source_, x);
    via = -1;
  }
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (dist_[i] == kInf) continue;
    const double cand = dist_[i] + pursuit::distance(verts[i], x);
    // Strict improvement beyond round-off keeps the direct route on ties.
    if (cand < best * (1.0 - 1e-15) && world_.segment_clear(verts[i], x)) {
      best = cand;
      via = static_cast<int>(i);
    }
  }
  if (via == -2) throw Error("shortest path: target unreachable");
  ShortestPath path;
  path.length = best;
  std::vector<Point2> rev{x};
  for (int v = via; v >= 0; v = prev_[static_cast<std::size_t>(v)]) rev.push_back(verts[static_cast<std::size_t>(v)]);
  rev.push_back(source_);
  path.waypoints.assign(rev.rbegin(), rev.rend());
  return path;
}

double shortest_distance(const World& world, Point2 a, Point2 b) {
  if (!world.contains(a) || !world.contains(b)) throw OutsideWorld("d_L: point outside the playable region");
  if (world.is_free_plane() || world.segment_clear(a, b)) return distance(a, b);
  // Fixed source order keeps d_L(a, b) == d_L(b, a) bit for bit.
  if (std::pair{b.x, b.y} < std::pair{a.x, a.y}) std::swap(a, b);
  return DistanceField(world, a).distance(b);
}

ShortestPath shortest_path(const World& world, Point2 a, Point2 b) {
  if (!world.contains(a) || !world.contains(b)) throw OutsideWorld("shortest path: point outside the playable region");
  if (world.is_free_plane() || world.segment_clear(a, b)) return {{a, b}, distance(a, b)};
  if (std::pair{b.x, b.y} < std::pair{a.x, a.y}) {
    ShortestPath p = DistanceField(world, b).path_to(a);
    std::reverse(p.waypoints.begin(), p.waypoints.end());
    return p;
  }
  return DistanceField(world, a).path_to(b);
}

double corner_distance_closed_form(double theta0, Point2 a, Point2 b) {
  const World w = World::corner_wedge(theta0);
  const PolarPoint pa = w.to_polar(a), pb = w.to_polar(b);
  if (std::abs(pa.theta - pb.theta) <= kPi) return distance(a, b);
  return pa.rho + pb.rho;
}

namespace {

// Gradient at `at` of the distance to the field's source, from the hop set.
Point2 gradient_from_hops(const std::vector<DistanceField::Hop>& hops, Point2 at) {
  std::optional<Point2> best_dir;
  double best_len = kInf;
  for (const auto& h : hops) {
    const Point2 d = at - h.from;
    if (norm(d) < 1e-14) continue;
    const Point2 dir = d / norm(d);
    if (!best_dir) {
      best_dir = dir;
      best_len = h.length;
      continue;
    }
    if (h.length > best_len * (1.0 + kTieTol) + 1e-15) break;
    if (1.0 - dot(dir, *best_dir) > 1e-12)
      throw NonDifferentiable("metric_gradients: two distinct shortest paths tie");
  }
  if (!best_dir) throw NonDifferentiable("metric_gradients: no departing direction");
  return *best_dir;
}

}  // namespace

MetricGradients metric_gradients(const World& world, Point2 a, Point2 b) {
  if (!world.contains(a) || !world.contains(b)) throw OutsideWorld("metric_gradients: point outside the playable region");
  if (distance(a, b) < 1e-14) throw NonDifferentiable("metric_gradients: coincident points");
  if (world.is_free_plane()) {
    const Point2 u = normalized(a - b);
    return {u, -u};
  }
  const DistanceField from_b(world, b), from_a(world, a);
  return {gradient_from_hops(from_b.hops(a), a), gradient_from_hops(from_a.hops(b), b)};
}

}  // namespace pursuit
