#include <sstream>

#include "doctest.h"

#include "pursuit/io.hpp"
#include "pursuit/scenario.hpp"
#include "pursuit/session.hpp"
#include "pursuit/wire.hpp"

using namespace pursuit;

namespace {

const char* kExample5 = R"({
  "name": "example5",
  "world": {"kind": "corner", "theta0_deg": 5},
  "alpha": 1.5,
  "pursuer": {"x": [4, 5], "strategy": "shortest_path_chase"},
  "evader": {"x": [2, -1], "policy": "human_live"},
  "dt": 0.001,
  "t_max": 60,
  "target": {"type": "region_complement"},
  "session": {"tick_rate": 0}
})";

std::string with(const std::string& key, const std::string& value) {
  auto j = nlohmann::json::parse(kExample5);
  j[key] = nlohmann::json::parse(value);
  return j.dump();
}

}  // namespace

TEST_CASE("scenario parsing") {
  const Scenario s = parse_scenario(kExample5);
  CHECK(s.name == "example5");
  CHECK(s.config.world.is_corner());
  CHECK(s.config.world.theta0() == doctest::Approx(5 * kPi / 180));
  CHECK(std::holds_alternative<PathChase>(s.config.pursuer));
  CHECK(std::holds_alternative<HumanLive>(s.config.evader));
  REQUIRE(s.target);
  CHECK(std::holds_alternative<RegionComplement>(s.target->parts[0]));
  CHECK(s.session.tick_rate == 0);

  // Round trip through the normalized form.
  const Scenario again = scenario_from_json(scenario_to_json(s));
  CHECK(scenario_to_json(again) == scenario_to_json(s));
}

TEST_CASE("scenario errors name the field") {
  auto message = [](const std::string& text) {
    try {
      parse_scenario(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{not json").find("malformed JSON") != std::string::npos);
  CHECK(message(with("alpha", "0.5")).find("alpha") != std::string::npos);
  CHECK(message(with("world", R"({"kind": "torus"})")).find("world") != std::string::npos);
  CHECK(message(with("pursuer", R"({"x": [1, 0], "strategy": "shortest_path_chase"})")).find("pursuer.x") !=
        std::string::npos);
  CHECK(message(with("evader", R"({"x": [2, -1], "policy": "teleport"})")).find("teleport") != std::string::npos);
  CHECK(message(with("dt", "-1")).find("dt") != std::string::npos);
  CHECK(message(with("capture_radius", "0.1")).find("capture_radius") != std::string::npos);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ParseError);
}

TEST_CASE("trajectory CSV round trip is exact") {
  SimConfig c;
  c.alpha = 1.7;
  c.dt = 1e-3;
  c.initial = {0.0, {0.1, -0.3}, {2.2, 1.3}};
  c.evader = StraightLine{{0.3, 0.7}};
  const SimResult r = run(c);
  std::stringstream buf;
  write_trajectory_csv(buf, r.trajectory);
  CHECK(buf.str().rfind(std::string(kTrajectoryHeader) + "\n", 0) == 0);
  const Trajectory back = read_trajectory_csv(buf);
  REQUIRE(back.rows.size() == r.trajectory.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    const auto &a = back.rows[i], &b = r.trajectory.rows[i];
    CHECK(a.t == b.t);
    CHECK(a.x_p == b.x_p);
    CHECK(a.x_e == b.x_e);
    CHECK(a.u_p == b.u_p);
    CHECK(a.u_e == b.u_e);
    CHECK(a.separation == b.separation);
    CHECK(a.flags == b.flags);
  }
  std::stringstream bad("t,x\n1,2\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad), ParseError);
}

TEST_CASE("boundary and report records") {
  const DominanceRegion ex(World::corner_wedge(5 * kPi / 180), {4, 5}, {2, -1}, 1.5);
  const auto j = boundary_to_json(boundary_arcs(ex, 360));
  CHECK(j["method"] == "polar");
  REQUIRE(j["arcs"].size() == 3);
  CHECK(j["arcs"][0]["curve"]["type"] == "oval");
  CHECK(j["arcs"][1]["curve"]["type"] == "apollonius");
  CHECK(j["arcs"][0]["points"][0].size() == 3);

  CheckReport r;
  r.id = "x.y";
  r.samples = 3;
  r.worst_margin = 0.5;
  r.tolerance = 1e-9;
  CHECK(check_report_line(finish_report(r)).rfind("PASS x.y", 0) == 0);
  const auto doc = check_reports_to_json("metric", 7, {finish_report(r)});
  CHECK(doc["pass"] == true);
  CHECK(doc["checks"][0]["id"] == "x.y");
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("wire messages round trip") {
  FrameMessage f;
  f.session = "s1";
  f.seq = 4;
  f.t = 0.004;
  f.x_p = {4, 5};
  f.x_e = {2, -1};
  f.u_p = {0.6, -0.8};
  f.u_e = {-1, 0};
  f.separation = 6.3245553203367599;
  f.phi_cursor = -0.25;
  f.capture_bound = 12.649110640673518;
  f.flags = 2;
  f.warnings = {"heading_normalized"};
  f.boundary_version = 1;
  f.boundary = WireBoundary{1, "polar", {{"oval", {{1, 2}, {3, 4}}}}};
  const std::string payload = encode_payload(f);
  CHECK(payload.rfind(R"({"type":"frame","session":"s1","seq":4,"t":0.0040000000000000001,"status":"Running",)", 0) ==
        0);
  const WireMessage back = decode_payload(payload);
  REQUIRE(std::holds_alternative<FrameMessage>(back));
  CHECK(encode_payload(back) == payload);
  const auto& g = std::get<FrameMessage>(back);
  CHECK(g.separation == f.separation);
  CHECK(g.boundary->arcs[0].points[1] == Point2{3, 4});

  const HeadingMessage h{"s2", {0.6, 0.8}, 12.5};
  CHECK(encode_payload(h) == R"({"type":"heading","session":"s2","direction":[0.59999999999999998,0.80000000000000004],"client_time":12.5})");
  CHECK(std::get<HeadingMessage>(decode_payload(encode_payload(h))).direction == h.direction);
  const CursorMessage c{"s2", std::nullopt};
  CHECK_FALSE(std::get<CursorMessage>(decode_payload(encode_payload(c))).point);
  const ErrorMessage e{"s9", "unknown_session", "no session 's9'"};
  CHECK(std::get<ErrorMessage>(decode_payload(encode_payload(e))).code == "unknown_session");

  CHECK_THROWS_AS(decode_payload("{\"type\":\"frame\"}"), ParseError);
  CHECK_THROWS_AS(decode_payload("[1,2]"), ParseError);
  CHECK_THROWS_AS(decode_payload("{\"type\":\"warp\"}"), ParseError);
  FrameMessage nan = f;
  nan.t = std::nan("");
  CHECK_THROWS_AS(encode_payload(nan), DomainError);
}

TEST_CASE("message reader splits arbitrary chunks") {
  const std::string a = encode_message(HeadingMessage{"s1", {1, 0}, 0.0});
  const std::string b = encode_message(ErrorMessage{"s1", "bad_request", "x"});
  const std::string stream = a + b;
  MessageReader reader;
  std::vector<std::string> got;
  for (char ch : stream)
    for (auto& p : reader.feed(std::string(1, ch))) got.push_back(p);
  REQUIRE(got.size() == 2);
  CHECK(frame_bytes(got[0]) == a);
  CHECK(frame_bytes(got[1]) == b);
  CHECK(reader.idle());
  MessageReader broken;
  CHECK_THROWS_AS(broken.feed("12x\n"), ParseError);
}

TEST_CASE("session frames, holds and replay") {
  Session s("t1", parse_scenario(kExample5));
  const WireBoundary b = s.boundary();
  CHECK(b.version == 1);
  REQUIRE(b.arcs.size() == 3);
  CHECK(b.arcs[0].type == "oval");
  CHECK(b.arcs[1].type == "apollonius");
  CHECK(b.arcs[2].type == "oval");

  // Before any input the evader stays still.
  s.step(3);
  CHECK(s.snapshot().state.x_e == Point2{2, -1});

  const HeadingAck ack = s.set_heading({0, -2});
  CHECK(ack.normalized);
  CHECK(ack.heading == Point2{0, -1});
  CHECK(ack.applies_at_tick == 3);
  s.step(10);
  s.set_cursor(Point2{-3, 0});
  s.step(10);
  s.set_heading({-1, 0});
  while (!s.finished()) s.step(1000);

  const auto frames = s.frames_since(0, std::chrono::milliseconds(0));
  REQUIRE(frames.size() > 30);
  for (std::size_t i = 0; i < frames.size(); ++i) CHECK(frames[i].seq == i);
  for (std::size_t i = 0; i + 2 < frames.size(); ++i) CHECK(std::abs(frames[i + 1].t - frames[i].t - 1e-3) < 1e-12);
  CHECK(std::find(frames[3].warnings.begin(), frames[3].warnings.end(), "heading_normalized") != frames[3].warnings.end());
  CHECK_FALSE(frames[5].phi_cursor);
  CHECK(frames[20].phi_cursor);
  CHECK(frames.back().status == SessionStatus::Captured);
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) CHECK(frames[i].status == SessionStatus::Running);
  CHECK_THROWS_AS(s.set_heading({1, 0}), DomainError);

  const Trajectory live = s.trajectory();
  const Trajectory again = replay(s.scenario(), s.inputs());
  REQUIRE(again.rows.size() == live.rows.size());
  std::ostringstream x, y;
  write_trajectory_csv(x, live);
  write_trajectory_csv(y, again);
  CHECK(x.str() == y.str());
}

TEST_CASE("session manager ids and pacing") {
  SessionManager m;
  auto sc = parse_scenario(kExample5);
  sc.session.tick_rate = 200;
  auto a = m.create(sc, true);
  auto b = m.create(sc, false);
  CHECK(a->id() == "s1");
  CHECK(b->id() == "s2");
  std::this_thread::sleep_for(std::chrono::milliseconds(150));
  CHECK(a->snapshot().tick > 5);
  CHECK(b->snapshot().tick == 0);
  CHECK(m.remove("s1"));
  CHECK_FALSE(m.remove("s1"));
  CHECK(m.ids() == std::vector<std::string>{"s2"});
  CHECK_FALSE(m.find("s7"));
}
