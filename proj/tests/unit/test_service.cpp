#include <sstream>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

#include "pursuit/io.hpp"
#include "pursuit/service.hpp"

using namespace pursuit;
using nlohmann::json;

namespace {

const char* kExample5 = R"({
  "name": "example5",
  "world": {"kind": "corner", "theta0_deg": 5},
  "alpha": 1.5,
  "pursuer": {"x": [4, 5], "strategy": "shortest_path_chase"},
  "evader": {"x": [2, -1], "policy": "human_live"},
  "dt": 0.001,
  "t_max": 60
})";

std::vector<WireMessage> decode_all(const std::string& body) {
  MessageReader reader;
  std::vector<WireMessage> out;
  for (const auto& p : reader.feed(body)) out.push_back(decode_payload(p));
  CHECK(reader.idle());
  return out;
}

}  // namespace

TEST_CASE("bind addresses") {
  CHECK(parse_bind("0.0.0.0:9000").host == "0.0.0.0");
  CHECK(parse_bind("0.0.0.0:9000").port == 9000);
  CHECK(parse_bind(":81").host == "127.0.0.1");
  CHECK(parse_bind("81").port == 81);
  CHECK_THROWS_AS(parse_bind("host:port"), ParseError);
}

TEST_CASE("live session round trip over HTTP") {
  Service service(false);
  const int port = service.start({"127.0.0.1", 0});
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(30, 0);

  auto created = cli.Post("/sessions", kExample5, "application/json");
  REQUIRE(created);
  REQUIRE(created->status == 201);
  const json snap = json::parse(created->body);
  const std::string id = snap["id"];
  CHECK(snap["status"] == "Running");
  REQUIRE(snap["boundary"]["arcs"].size() == 3);
  CHECK(snap["boundary"]["arcs"][0]["type"] == "oval");
  CHECK(snap["boundary"]["arcs"][1]["type"] == "apollonius");
  CHECK(snap["boundary"]["arcs"][2]["type"] == "oval");

  // 100 headings, a few ticks apart, alternating framings.
  for (int k = 0; k < 100; ++k) {
    const double a = -2.6 + 0.01 * k;
    const HeadingMessage h{id, {std::cos(a), std::sin(a)}, 0.01 * k};
    const std::string body = (k % 2) ? encode_message(h) : encode_payload(h);
    auto r = cli.Post(("/sessions/" + id + "/heading").c_str(), body, "application/x-pursuit-frames");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    CHECK(json::parse(r->body)["normalized"] == false);
    REQUIRE(cli.Post(("/sessions/" + id + "/step?n=5").c_str(), "", "text/plain"));
  }
  auto norm_ack = cli.Post(("/sessions/" + id + "/heading").c_str(), R"({"type":"heading","session":")" + id +
                                                                        R"(","direction":[0,-3],"client_time":1})",
                           "application/json");
  REQUIRE(norm_ack);
  CHECK(json::parse(norm_ack->body)["warnings"][0] == "heading_normalized");

  // Finish the episode, then read the whole stream.
  for (int i = 0; i < 100; ++i) {
    auto r = cli.Post(("/sessions/" + id + "/step?n=1000").c_str(), "", "text/plain");
    REQUIRE(r);
    if (json::parse(r->body)["status"] != "Running") break;
  }
  auto stream = cli.Get(("/sessions/" + id + "/stream").c_str());
  REQUIRE(stream);
  CHECK(stream->get_header_value("Content-Type") == "application/x-pursuit-frames");
  const auto msgs = decode_all(stream->body);
  REQUIRE(msgs.size() > 500);
  double last_t = -1;
  std::uint64_t seq = 0;
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    const auto& f = std::get<FrameMessage>(msgs[i]);
    CHECK(f.seq == seq++);
    CHECK(f.t > last_t);
    if (i + 1 < msgs.size()) {
      if (i > 0) CHECK(std::abs(f.t - last_t - 1e-3) < 1e-12);
      CHECK(f.status == SessionStatus::Running);
    }
    CHECK(f.boundary.has_value() == (i == 0));
    last_t = f.t;
  }
  const auto& final_frame = std::get<FrameMessage>(msgs.back());
  CHECK(final_frame.status == SessionStatus::Captured);

  // Server-side replay of the logged headings reproduces the trajectory.
  auto inputs = cli.Get(("/sessions/" + id + "/inputs").c_str());
  REQUIRE(inputs);
  const json log = json::parse(inputs->body);
  CHECK(log["inputs"].size() == 101);
  std::vector<InputRecord> records;
  for (const auto& r : log["inputs"]) records.push_back({r["tick"].get<long>(), {r["heading"][0], r["heading"][1]}});
  auto csv = cli.Get(("/sessions/" + id + "/trajectory").c_str());
  REQUIRE(csv);
  std::ostringstream replayed;
  write_trajectory_csv(replayed, replay(parse_scenario(kExample5), records));
  CHECK(replayed.str() == csv->body);

  auto summary = cli.Get(("/sessions/" + id + "/summary").c_str());
  REQUIRE(summary);
  const json sum = json::parse(summary->body);
  CHECK(sum["outcome"] == "captured");

  // Errors are length-delimited error messages.
  auto missing = cli.Get("/sessions/s999/state");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  const auto err = decode_all(missing->body);
  REQUIRE(err.size() == 1);
  CHECK(std::get<ErrorMessage>(err[0]).code == "unknown_session");
  auto bad = cli.Post(("/sessions/" + id + "/heading").c_str(), "{oops", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  auto late = cli.Post(("/sessions/" + id + "/heading").c_str(), encode_payload(HeadingMessage{id, {1, 0}, 0}),
                       "application/json");
  REQUIRE(late);
  CHECK(late->status == 409);
  auto bad_scenario = cli.Post("/sessions", R"({"alpha": 2})", "application/json");
  REQUIRE(bad_scenario);
  CHECK(bad_scenario->status == 400);

  auto del = cli.Delete(("/sessions/" + id).c_str());
  REQUIRE(del);
  CHECK(del->status == 200);
  CHECK(cli.Get(("/sessions/" + id + "/state").c_str())->status == 404);
  service.stop();
}

TEST_CASE("paced sessions stream while they run") {
  Service service(true);
  const int port = service.start({"127.0.0.1", 0});
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(30, 0);
  auto doc = json::parse(kExample5);
  doc["evader"] = {{"x", {2, -1}}, {"policy", "straight_line"}, {"direction", {1, 0}}};
  doc["session"] = {{"tick_rate", 1000}};
  doc["t_max"] = 0.3;
  auto created = cli.Post("/sessions", json{{"scenario", doc}}.dump(), "application/json");
  REQUIRE(created);
  REQUIRE(created->status == 201);
  const std::string id = json::parse(created->body)["id"];

  std::string body;
  auto r = cli.Get(("/sessions/" + id + "/stream").c_str(), [&](const char* data, std::size_t n) {
    body.append(data, n);
    return true;
  });
  REQUIRE(r);
  const auto msgs = decode_all(body);
  REQUIRE(!msgs.empty());
  CHECK(std::get<FrameMessage>(msgs.back()).status != SessionStatus::Running);
  CHECK(std::get<FrameMessage>(msgs.front()).seq == 0);
  service.stop();
}
