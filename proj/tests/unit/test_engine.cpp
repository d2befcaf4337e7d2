#include <cmath>

#include "doctest.h"

#include "pursuit/engine.hpp"

using namespace pursuit;

namespace {

constexpr double kDeg = kPi / 180.0;

SimConfig collinear_chase() {
  SimConfig c;
  c.alpha = 2.0;
  c.dt = 1e-3;
  c.t_max = 10;
  c.capture_epsilon = 1e-3;
  c.initial = {0.0, {0, 0}, {1, 0}};
  c.pursuer = FreeDeltaStar{};
  c.evader = StraightLine{{1, 0}};
  return c;
}

}  // namespace

TEST_CASE("euler step") {
  const GameState s = step({0.0, {0, 0}, {1, 0}}, {1, 0}, {1, 0}, 0.1, World::free_plane(), 2.0);
  CHECK(s.x_p.x == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(s.x_e.x == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(s.t == doctest::Approx(0.1));
  const GameState z = step({0.3, {1, 2}, {3, 4}}, {1, 0}, {0, 1}, 0.0, World::free_plane(), 2.0);
  CHECK(z.x_p == Point2{1, 2});
  CHECK(z.x_e == Point2{3, 4});
}

TEST_CASE("steps into the wedge slide and never enter it") {
  const World w = World::corner_wedge(5 * kDeg);
  StepFlags f;
  const Point2 start = from_polar(2, 5 * kDeg);
  const GameState s = step({0.0, {-3, 0}, start}, {0, 1}, {0, -1}, 0.01, w, 2.0, &f);
  CHECK(f.evader_slid);
  CHECK(w.contains(s.x_e));
  CHECK(distance(s.x_e, start) <= 0.01 + 1e-15);
}

TEST_CASE("collinear chase captures at t = 1") {
  const SimResult r = run(collinear_chase());
  REQUIRE(std::holds_alternative<Captured>(r.outcome));
  const double t_f = std::get<Captured>(r.outcome).t_f;
  CHECK(std::abs(t_f - 1.0) <= 5e-3);
  CHECK(r.capture_bound == doctest::Approx(1.0));
  CHECK(r.trajectory.rows.size() == static_cast<std::size_t>(std::ceil(t_f / 1e-3 - 1e-9)) + 1);
  CHECK(r.containment.pass);
  CHECK(r.closing_rate.pass);
  // Separation shrinks at exactly alpha - 1 per unit time.
  const auto& rows = r.trajectory.rows;
  for (std::size_t i = 0; i + 2 < rows.size(); ++i)
    CHECK(std::abs((rows[i + 1].separation - rows[i].separation) / 1e-3 - (1 - 2.0)) < 1e-9);
}

TEST_CASE("stationary evader is reached in d0 / alpha") {
  SimConfig c = collinear_chase();
  c.initial = {0.0, {0, 0}, {3, 4}};
  c.evader = Waypoints{{{3, 4}}, true};
  const SimResult r = run(c);
  REQUIRE(std::holds_alternative<Captured>(r.outcome));
  CHECK(std::abs(std::get<Captured>(r.outcome).t_f - 5.0 / 2.0) < 2e-3);
  CHECK(r.containment.worst <= 0.0);
}

TEST_CASE("t_max = 0 times out at once") {
  SimConfig c = collinear_chase();
  c.t_max = 0;
  const SimResult r = run(c);
  CHECK(std::holds_alternative<TimedOut>(r.outcome));
  CHECK(r.trajectory.rows.size() == 1);
}

TEST_CASE("timestamps advance by dt") {
  SimConfig c = collinear_chase();
  c.initial = {0.0, {0, 0}, {4, 3}};
  c.evader = StraightLine{{0, 1}};
  const SimResult r = run(c);
  const auto& rows = r.trajectory.rows;
  for (std::size_t i = 0; i + 2 < rows.size(); ++i) CHECK(std::abs(rows[i + 1].t - rows[i].t - 1e-3) < 1e-12);
  CHECK(rows.back().t - rows[rows.size() - 2].t <= 1e-3 + 1e-12);
  CHECK(rows.back().t > rows[rows.size() - 2].t);
}

TEST_CASE("monitors flag a pursuer that runs away") {
  SimConfig c = collinear_chase();
  c.pursuer = RunAway{};
  c.t_max = 2;
  const SimResult r = run(c);
  CHECK(std::holds_alternative<TimedOut>(r.outcome));
  CHECK_FALSE(r.closing_rate.pass);
  CHECK_FALSE(r.containment.pass);

  c.stop_on_violation = true;
  const SimResult s = run(c);
  CHECK(std::holds_alternative<MonitorViolation>(s.outcome));
}

TEST_CASE("evader holding still never leaves its region") {
  const DominanceRegion region(World::free_plane(), {0, 0}, {2, 0}, 2.0);
  Trajectory t;
  for (int i = 0; i < 10; ++i) t.rows.push_back({i * 0.1, {0.1 * i, 0}, {2, 0}, {1, 0}, {0, 0}, 2 - 0.1 * i, 0});
  const MonitorReport m = monitor_containment(t, region, 1e-2);
  CHECK(m.pass);
  CHECK(m.worst <= 0.0);
}

TEST_CASE("same configuration gives bit-identical trajectories") {
  SimConfig c = collinear_chase();
  c.initial = {0.0, {0, 0}, {2, 1.5}};
  c.evader = Scripted{{0.0, 0.3, 0.9}, {{0, 1}, {-1, 0.2}, {0.3, -1}}};
  const SimResult a = run(c), b = run(c);
  REQUIRE(a.trajectory.rows.size() == b.trajectory.rows.size());
  for (std::size_t i = 0; i < a.trajectory.rows.size(); ++i) {
    CHECK(a.trajectory.rows[i].x_p == b.trajectory.rows[i].x_p);
    CHECK(a.trajectory.rows[i].x_e == b.trajectory.rows[i].x_e);
  }
}

TEST_CASE("corner guarantee on one probe") {
  SimConfig c;
  c.world = World::corner_wedge(10 * kDeg);
  c.alpha = 2.0;
  c.dt = 1e-3;
  c.t_max = 20;
  c.initial = {0.0, {0.5, 2}, {-1, -2.5}};
  c.pursuer = CornerGammaStar{};
  c.evader = BoundaryProbe{{3, -2.5}};
  const SimResult r = run(c);
  REQUIRE(std::holds_alternative<Captured>(r.outcome));
  CHECK(std::get<Captured>(r.outcome).t_f <= r.capture_bound * 1.01 + 2 * c.dt);
  CHECK(r.containment.pass);
  CHECK(r.closing_rate.pass);
  for (const auto& row : r.trajectory.rows) {
    CHECK(c.world.contains(row.x_p));
    CHECK(c.world.contains(row.x_e));
  }
}

TEST_CASE("invalid configurations") {
  SimConfig c = collinear_chase();
  c.dt = 0;
  CHECK_THROWS_AS(run(c), DomainError);
  c = collinear_chase();
  c.initial.x_e = {1e-4, 0};
  CHECK_THROWS_AS(run(c), DomainError);
  c = collinear_chase();
  c.world = World::corner_wedge(0.1);
  c.capture_radius = 0.1;
  c.initial = {0.0, {-1, 0}, {-3, 0}};
  CHECK_THROWS_AS(run(c), DomainError);
}

TEST_CASE("episode stepping matches run") {
  SimConfig c = collinear_chase();
  c.initial = {0.0, {0, 0}, {2, 1}};
  c.evader = StraightLine{{0, 1}};
  Episode e(c);
  while (!e.finished()) e.advance();
  const SimResult a = e.finish(), b = run(c);
  REQUIRE(a.trajectory.rows.size() == b.trajectory.rows.size());
  CHECK(a.trajectory.rows.back().x_p == b.trajectory.rows.back().x_p);
  CHECK_THROWS_AS(Episode(c).set_evader_heading({1, 0}), DomainError);
}
