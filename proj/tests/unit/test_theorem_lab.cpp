#include "doctest.h"

#include "pursuit/theorem_lab.hpp"

using namespace pursuit;

namespace {

constexpr double kDeg = kPi / 180.0;

}  // namespace

TEST_CASE("check reports fail exactly below minus the tolerance") {
  CheckReport r;
  r.tolerance = 1e-9;
  r.worst_margin = -1e-9;
  CHECK(finish_report(r).pass);
  r.worst_margin = -2e-9;
  CHECK_FALSE(finish_report(r).pass);
}

TEST_CASE("angle inequality on a free-plane region") {
  for (double l : {0.0, 0.1}) {
    const CheckReport r = check_oval_angle_inequality({0, 0}, {2, 1}, 1.7, l, 2000, 3);
    CHECK(r.pass);
    CHECK(r.worst_margin >= -1e-9);
    CHECK(r.stats.at("max_abs_dpsi_dchi") <= 1 + 1e-6);
  }
}

TEST_CASE("corner lemmas on a fixed configuration") {
  const World w = World::corner_wedge(10 * kDeg);
  const CheckReport cosine = check_gamma_star_cosine(w, {0.5, 2}, {-1, -2.5}, 2.0, 2000, 5);
  CHECK(cosine.pass);
  const CheckReport inc = check_increment_positive(w, {0.5, 2}, {-1, -2.5}, 2.0, 2000, 5);
  CHECK(inc.pass);
  CHECK(inc.worst_margin > 0);
  double total = 0;
  for (const char* k : {"case1_visible_circle", "case2_visible_oval", "case3_hidden_circle", "case4_hidden_oval"})
    total += inc.stats.at(k);
  CHECK(total > 0);
}

TEST_CASE("necessary condition") {
  const World w = World::corner_wedge(5 * kDeg);
  const Example5 ex;
  const auto pairs = example5_arc_ab_pairs(200, 9);
  REQUIRE(!pairs.empty());
  const CheckReport bad = check_necessary_condition(w, ex.x_p, ex.x_e, ex.alpha, pairs);
  CHECK(bad.samples > 0);
  CHECK(bad.worst_margin < 0);
  CHECK_FALSE(bad.pass);

  // Identical points give 1 - 1 = 0.
  const Point2 c = pairs.front().first;
  const CheckReport same = check_necessary_condition(w, ex.x_p, ex.x_e, ex.alpha, {{c, c}});
  CHECK(std::abs(same.worst_margin) < 1e-12);

  const DominanceRegion fp(World::free_plane(), {0, 0}, {3, 1}, 2.0);
  std::vector<std::pair<Point2, Point2>> free_pairs;
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; j += 7)
      free_pairs.push_back({ray_boundary_intersection(fp, from_polar(1, 2 * kPi * i / 60)),
                            ray_boundary_intersection(fp, from_polar(1, 2 * kPi * j / 60 + 0.1))});
  const CheckReport good = check_necessary_condition(World::free_plane(), {0, 0}, {3, 1}, 2.0, free_pairs);
  CHECK(good.pass);
  CHECK(good.worst_margin >= -1e-9);
}

TEST_CASE("counterexample divergence") {
  const CheckReport r = check_counterexample_divergence(10.0);
  CHECK(r.pass);
  CHECK(r.stats.at("heading_gap_deg") >= 1.0);
  CHECK(r.stats.at("first_leg_input_gap") <= 1e-12);
  const CheckReport same = check_counterexample_divergence(0.0);
  CHECK(same.stats.at("heading_gap_deg") < 1e-9);
}

TEST_CASE("example 5 structure") {
  const CheckReport r = check_example5_structure();
  CHECK(r.pass);
  CHECK(r.stats.at("arc_count") == 3);
  CHECK(std::abs(r.stats.at("phi_origin") - (std::sqrt(41.0) - 1.5 * std::sqrt(5.0))) < 1e-12);
}

TEST_CASE("boundary evolution identity") {
  SimConfig c;
  c.alpha = 2.0;
  c.dt = 1e-4;
  c.t_max = 0.5;
  c.initial = {0.0, {0, 0}, {3, 1}};
  c.evader = StraightLine{{0, 1}};
  c.monitors = {false, false};
  const SimResult sim = run(c);
  const CheckReport r = check_boundary_evolution_identity(World::free_plane(), 2.0, sim.trajectory, 200, 3);
  CHECK(r.pass);

  // Players still: both sides vanish.
  Trajectory still;
  for (int i = 0; i < 5; ++i) still.rows.push_back({i * 1e-4, {0, 0}, {3, 1}, {0, 0}, {0, 0}, std::sqrt(10.0), 0});
  const CheckReport s = check_boundary_evolution_identity(World::free_plane(), 2.0, still, 50, 3);
  CHECK(s.pass);
  CHECK(std::abs(s.worst_margin) < 1e-9);
}

TEST_CASE("defense decisions") {
  const World fp = World::free_plane();
  const TargetRegion far{{Disk{{12, 0}, 1}}};
  const DefenseResult d = defense_decision(fp, {0, 0}, {3, 1}, 2.0, far);
  CHECK(d.verdict == DefenseVerdict::GuaranteedDefense);
  CHECK(d.max_phi < 0);

  // A small disk straddling the boundary point (2, 0) of the region of (0,0) vs (1,0).
  const TargetRegion near{{Disk{{2.05, 0}, 0.1}}};
  const DefenseResult b = defense_decision(fp, {0, 0}, {1, 0}, 2.0, near);
  CHECK(b.verdict == DefenseVerdict::GuaranteedBreachFreePlane);
  CHECK(b.max_phi > 0);

  const Example5 ex;
  const TargetRegion comp{{RegionComplement{}}};
  const DefenseResult e = defense_decision(ex.world(), ex.x_p, ex.x_e, ex.alpha, comp);
  CHECK(e.verdict == DefenseVerdict::NotCertified);

  const TargetRegion corner_far{{HalfPlane{{1, 0}, 40}}};
  const DefenseResult g = defense_decision(World::corner_wedge(10 * kDeg), {0.5, 2}, {-1, -2.5}, 2.0, corner_far);
  CHECK(g.verdict == DefenseVerdict::GuaranteedDefense);

  CHECK_THROWS_AS(defense_decision(fp, {0, 0}, {3, 1}, 2.0, TargetRegion{{Disk{{3, 1}, 0.5}}}), DomainError);
}

TEST_CASE("metric checks") {
  CHECK(check_metric_axioms(World::corner_wedge(20 * kDeg), 500, 1).pass);
  CHECK(check_corner_closed_form(5 * kDeg, 500, 1).pass);
  CHECK(check_gradients(World::corner_wedge(20 * kDeg), 200, 1).pass);
  CHECK(check_eta_m_tangent(20, 1).pass);
  CHECK(check_path_waypoints(World::polygons({Polygon{{{2, -1}, {4, -1}, {4, 1}, {2, 1}}}}), 200, 1).pass);
}

TEST_CASE("suites are deterministic") {
  const auto a = run_suite("metric", 7), b = run_suite("metric", 7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].worst_margin == b[i].worst_margin);
    CHECK(a[i].witness == b[i].witness);
  }
  CHECK_THROWS(run_suite("nope", 7));
}
