#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "pursuit/regions.hpp"

using namespace pursuit;

namespace {

constexpr double kDeg = kPi / 180.0;

const Point2 kExP{4, 5}, kExE{2, -1};
constexpr double kExAlpha = 1.5;

DominanceRegion example5() { return {World::corner_wedge(5 * kDeg), kExP, kExE, kExAlpha}; }

oracle::Pt O(Point2 p) { return {p.x, p.y}; }

double numeric_eta_m(Point2 x_p, Point2 x_e, double alpha) {
  return oracle::tangent_half_angle(O(x_p), O(x_e), alpha);
}

struct CornerConfig {
  double theta0;
  Point2 x_p, x_e;
  double alpha;
};

CornerConfig random_corner(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> t0(2 * kDeg, 45 * kDeg), u(0, 1), a(1.1, 3.0);
  for (;;) {
    CornerConfig c;
    c.theta0 = t0(rng);
    c.alpha = a(rng);
    const double span = 2 * kPi - 2 * c.theta0;
    c.x_e = from_polar(0.5 + 4.5 * u(rng), c.theta0 + span * u(rng));
    c.x_p = from_polar(0.5 + 6 * u(rng), c.theta0 + span * u(rng));
    if (norm(c.x_p) < c.alpha * norm(c.x_e) * (1 - 1e-3) && distance(c.x_p, c.x_e) > 0.2) return c;
  }
}

}  // namespace

TEST_CASE("phi examples") {
  const DominanceRegion ex = example5();
  CHECK(ex.phi(kExE) == doctest::Approx(ex.separation()));
  CHECK(ex.phi(kExE) > 0);
  CHECK(std::abs(ex.phi({0, 0}) - (std::sqrt(41.0) - 1.5 * std::sqrt(5.0))) < 1e-12);
  const DominanceRegion fp(World::free_plane(), {0, 0}, {1, 0}, 2.0);
  CHECK(fp.phi({2, 0}) == 0.0);
  CHECK_THROWS_AS(ex.phi({1, 0}), OutsideWorld);
  const DominanceRegion withl(World::free_plane(), {0, 0}, {3, 0}, 2.0, 0.5);
  CHECK(withl.phi({3, 0}) == doctest::Approx(2.5));
}

TEST_CASE("classify") {
  const DominanceRegion fp(World::free_plane(), {0, 0}, {1, 0}, 2.0);
  CHECK(fp.classify({2, 0}) == Side::Boundary);
  CHECK(fp.classify({1, 0}) == Side::Inside);
  CHECK(example5().classify({10, 10}) == Side::Outside);
}

TEST_CASE("degenerate regions are rejected") {
  CHECK_THROWS_AS(DominanceRegion(World::free_plane(), {0, 0}, {1, 0}, 1.0), DegenerateRegion);
  CHECK_THROWS_AS(DominanceRegion(World::free_plane(), {0, 0}, {1, 0}, 2.0, 1.0), DegenerateRegion);
  CHECK_THROWS_AS(DominanceRegion(World::corner_wedge(0.1), {-1, 0}, {0, 1}, 2.0, 0.1), DegenerateRegion);
}

TEST_CASE("apollonius circle") {
  const ApolloniusCircle c = apollonius_of({0, 0}, {1, 0}, 2.0);
  CHECK(std::abs(c.center().x - 4.0 / 3.0) < 1e-15);
  CHECK(c.center().y == 0.0);
  CHECK(std::abs(c.radius() - 2.0 / 3.0) < 1e-15);
  for (int k = 0; k < 10; ++k) {
    const Point2 x = c.center() + from_polar(c.radius(), 2 * kPi * k / 10);
    CHECK(std::abs(distance(x, {0, 0}) - 2.0 * distance(x, {1, 0})) < 1e-12);
  }
  CHECK(apollonius_of({0, 0}, {1, 0}, 100.0).radius() < 0.011);
  CHECK(distance(apollonius_of({0, 0}, {1, 0}, 100.0).center(), {1, 0}) < 1e-3);
  const ApolloniusCircle m = apollonius_of({0.3, 1.2}, {-0.7, 2.0}, 1.7);
  const ApolloniusCircle mr = apollonius_of({0.3, -1.2}, {-0.7, -2.0}, 1.7);
  CHECK(mr.center().x == doctest::Approx(m.center().x));
  CHECK(mr.center().y == doctest::Approx(-m.center().y));
  CHECK_THROWS_AS(apollonius_of({1, 1}, {1, 1}, 2.0), DomainError);
}

TEST_CASE("free-plane ray intersection") {
  const DominanceRegion fp(World::free_plane(), {0, 0}, {1, 0}, 2.0);
  const Point2 ahead = ray_boundary_intersection(fp, {1, 0});
  CHECK(std::abs(ahead.x - 2.0) < 1e-12);
  CHECK(std::abs(ahead.y) < 1e-12);
  const Point2 behind = ray_boundary_intersection(fp, {-1, 0});
  CHECK(std::abs(behind.x - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(behind.y) < 1e-12);
}

TEST_CASE("corner ray intersection lands on one of the two defining curves") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int i = 0; i < 1000; ++i) {
    const CornerConfig c = random_corner(rng);
    const DominanceRegion r(World::corner_wedge(c.theta0), c.x_p, c.x_e, c.alpha);
    const Point2 dir = from_polar(1.0, ang(rng));
    const Point2 x = ray_boundary_intersection(r, dir);
    CHECK(std::abs(cross(x - c.x_e, dir)) < 1e-9 * (1 + norm(x)));
    CHECK(dot(x - c.x_e, dir) > 0);
    const double circle = distance(x, c.x_p) - c.alpha * distance(x, c.x_e);
    const double oval = norm(x) + norm(c.x_p) - c.alpha * distance(x, c.x_e);
    const FSet fs(c.x_p, c.x_e, c.alpha);
    const double f = fs.value_unchecked(x);
    CHECK(std::abs(f) <= 1e-10 * (1 + norm(x)));
    if (fs.in_sector(x)) CHECK(f_value(c.x_p, c.x_e, c.alpha, x) == f);
    else CHECK_THROWS_AS(f_value(c.x_p, c.x_e, c.alpha, x), DomainError);
    CHECK(std::min(std::abs(circle), std::abs(oval)) <= 1e-10 * (1 + norm(x)));
  }
}

TEST_CASE("eta_m") {
  const double alpha = 2.0;
  const Point2 x_e{0, -1};
  CHECK(std::abs(eta_m({0, 2}, x_e, alpha) - std::acos(-1.0 / alpha)) < 1e-12);
  CHECK(std::abs(eta_m({0, 1}, {0, -1}, 2.0) - kPi / 3) < 1e-12);
  CHECK_THROWS_AS(eta_m({0, 3}, {0, -1}, 2.0), DomainError);

  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const CornerConfig c = random_corner(rng);
    CHECK(std::abs(eta_m(c.x_p, c.x_e, c.alpha) - numeric_eta_m(c.x_p, c.x_e, c.alpha)) < 1e-8);
  }
}

TEST_CASE("f equals phi inside the sector") {
  const FSet seam_set({0, 2}, {1.5, -1.5}, 2.0);
  // The seam is the ray opposite x_p; both branches agree there.
  const Point2 seam{0, -3};
  CHECK(std::abs(seam_set.circle_value(seam) - seam_set.oval_value(seam)) < 1e-12);
  CHECK(f_value({0, 2}, {1.5, -1.5}, 2.0, {1.5, -1.5}) > 0);

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const CornerConfig c = random_corner(rng);
    const World w = World::corner_wedge(c.theta0);
    const DominanceRegion r(w, c.x_p, c.x_e, c.alpha);
    const FSet fs(c.x_p, c.x_e, c.alpha);
    for (int k = 0; k < 50; ++k) {
      const Point2 x{u(rng), u(rng)};
      if (!w.contains(x) || !fs.in_sector(x)) continue;
      ++checked;
      CHECK(std::abs(fs.value(x) - r.phi(x)) <= 1e-12 * (1 + std::abs(r.phi(x))));
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("free-plane boundaries") {
  const DominanceRegion fp(World::free_plane(), {0, 0}, {1, 0}, 2.0);
  const BoundaryResult b = boundary_arcs(fp, 360);
  REQUIRE(b.arcs.size() == 1);
  CHECK(arc_type_name(b.arcs[0].curve) == "apollonius");
  const ApolloniusCircle c = apollonius_of({0, 0}, {1, 0}, 2.0);
  for (const auto& p : b.arcs[0].points) CHECK(std::abs(distance(p.x, c.center()) - c.radius()) < 1e-12);

  const DominanceRegion withl(World::free_plane(), {0, 0}, {2, 1}, 1.8, 0.1);
  const BoundaryResult bl = boundary_arcs(withl, 360);
  REQUIRE(bl.arcs.size() == 1);
  CHECK(arc_type_name(bl.arcs[0].curve) == "oval");
  for (const auto& p : bl.arcs[0].points)
    CHECK(std::abs(distance(p.x, {0, 0}) - 1.8 * distance(p.x, {2, 1}) - 0.1) < 1e-9);
}

TEST_CASE("first-type ovals are strictly convex") {
  const DominanceRegion r(World::free_plane(), {0, 0}, {2.5, 0.5}, 1.6, 0.1);
  const auto poly = boundary_arcs(r, 720).polyline();
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> pick(0, poly.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (distance(poly[a], poly[b]) < 1e-3) continue;
    CHECK(r.phi((poly[a] + poly[b]) * 0.5) > 0);
  }
}

TEST_CASE("example 5 boundary: oval, apollonius, oval") {
  const DominanceRegion ex = example5();
  const BoundaryResult b = boundary_arcs(ex, 720);
  REQUIRE(b.arcs.size() == 3);
  CHECK(arc_type_name(b.arcs[0].curve) == "oval");
  CHECK(arc_type_name(b.arcs[1].curve) == "apollonius");
  CHECK(arc_type_name(b.arcs[2].curve) == "oval");

  const Point2 A = b.arcs[0].start, B = b.arcs[0].end, C = b.arcs[1].end, D = b.arcs[2].end;
  CHECK(distance(B, b.arcs[1].start) < 1e-12);
  CHECK(distance(C, b.arcs[2].start) < 1e-12);
  // B and C on the extensions of E-O and P-O beyond the vertex.
  CHECK(std::abs(cross(B, kExE)) / norm(kExE) < 1e-6);
  CHECK(dot(B, kExE) < 0);
  CHECK(std::abs(cross(C, kExP)) / norm(kExP) < 1e-6);
  CHECK(dot(C, kExP) < 0);
  // A and D on the two obstacle edges.
  const Point2 upper = from_polar(1, 5 * kDeg), lower = from_polar(1, -5 * kDeg);
  const double a_edge = std::min(std::abs(cross(A, upper)), std::abs(cross(A, lower)));
  const double d_edge = std::min(std::abs(cross(D, upper)), std::abs(cross(D, lower)));
  CHECK(a_edge < 1e-6);
  CHECK(d_edge < 1e-6);

  // Residuals against the reference metric.
  const oracle::Scene s = oracle::Scene::wedge(5 * kDeg);
  const oracle::Field fp(s, O(kExP)), fe(s, O(kExE));
  for (Point2 x : b.polyline()) CHECK(std::abs(fp.to(O(x)) - kExAlpha * fe.to(O(x))) < 1e-8);
}

TEST_CASE("corner boundary with the vertex outside lies on the F curve") {
  const World w = World::corner_wedge(10 * kDeg);
  const Point2 x_p{0.5, 2}, x_e{-1, -2.5};
  const DominanceRegion r(w, x_p, x_e, 2.0);
  REQUIRE(r.vertex_outside_closure());
  const BoundaryResult b = boundary_arcs(r, 720);
  CHECK(b.method == "ray");
  for (Point2 x : b.polyline()) CHECK(std::abs(f_value(x_p, x_e, 2.0, x)) < 1e-8);
  for (Point2 x : b.polyline()) CHECK(std::abs(r.phi(x)) < 1e-8);
}

TEST_CASE("polygon worlds are contoured") {
  const World w = World::polygons({Polygon{{{2, -1}, {4, -1}, {4, 1}, {2, 1}}}});
  const DominanceRegion r(w, {6, 0}, {0, 0.5}, 1.5);
  const BoundaryResult b = boundary_arcs(r);
  CHECK(b.method == "contour");
  REQUIRE(!b.arcs.empty());
  const oracle::Scene s = oracle::Scene::polygons({{{2, -1}, {4, -1}, {4, 1}, {2, 1}}});
  const oracle::Field fp(s, {6, 0}), fe(s, {0, 0.5});
  for (const auto& a : b.arcs) {
    CHECK(arc_type_name(a.curve) == "untyped");
    for (const auto& p : a.points) CHECK(std::abs(fp.to(O(p.x)) - 1.5 * fe.to(O(p.x))) < 1e-8);
  }
}

TEST_CASE("shortest paths from the evader into its region stay inside") {
  const World w = World::polygons({Polygon{{{2, -1}, {4, -1}, {4, 1}, {2, 1}}}});
  const DominanceRegion r(w, {6, 0}, {0, 0.5}, 1.5);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-8, 8);
  int n = 0;
  while (n < 300) {
    const Point2 x{u(rng), u(rng)};
    if (!w.contains(x) || r.phi(x) < 0) continue;
    ++n;
    const ShortestPath p = shortest_path(w, r.evader(), x);
    for (std::size_t k = 0; k + 1 < p.waypoints.size(); ++k)
      for (int j = 1; j < 20; ++j) {
        const Point2 q = p.waypoints[k] + (p.waypoints[k + 1] - p.waypoints[k]) * (j / 20.0);
        CHECK(r.phi(q) > 0);
      }
  }
}

TEST_CASE("segments from the evader to the circle and oval stay inside") {
  const FSet fs({0.5, 2}, {-1, -2.5}, 2.0);
  const Point2 x_e = fs.evader();
  const ApolloniusCircle c = apollonius_of(fs.pursuer(), x_e, 2.0);
  for (int k = 0; k < 64; ++k) {
    const Point2 x = c.center() + from_polar(c.radius(), 2 * kPi * k / 64);
    for (int j = 1; j < 20; ++j) CHECK(fs.circle_value(x_e + (x - x_e) * (j / 20.0)) > 0);
  }
  for (int k = 0; k < 64; ++k) {
    // Oval point on the ray from x_e, found by bisection of the oval function.
    const Point2 dir = from_polar(1, 2 * kPi * k / 64);
    double lo = 0, hi = 100;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (lo + hi);
      (fs.oval_value(x_e + dir * m) > 0 ? lo : hi) = m;
    }
    const Point2 x = x_e + dir * lo;
    for (int j = 1; j < 20; ++j) CHECK(fs.oval_value(x_e + (x - x_e) * (j / 20.0)) > 0);
  }
}
