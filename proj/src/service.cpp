#include "pursuit/service.hpp"

#include <atomic>
#include <charconv>

#include "httplib.h"
#include "json.hpp"

#include "pursuit/io.hpp"

namespace pursuit {

using ojson = nlohmann::ordered_json;

BindAddress parse_bind(const std::string& text) {
  BindAddress a;
  std::string port = text;
  if (const auto colon = text.rfind(':'); colon != std::string::npos) {
    if (colon > 0) a.host = text.substr(0, colon);
    port = text.substr(colon + 1);
  }
  int p = -1;
  const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), p);
  if (ec != std::errc() || ptr != port.data() + port.size() || p < 0 || p > 65535)
    throw ParseError("bind address '" + text + "': expected host:port");
  a.port = p;
  return a;
}

namespace {

constexpr const char* kFrames = "application/x-pursuit-frames";

void send_error(httplib::Response& res, int status, const std::string& session, const std::string& code,
                const std::string& message) {
  res.status = status;
  res.set_content(encode_message(ErrorMessage{session, code, message}), kFrames);
}

void send_json(httplib::Response& res, const ojson& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

ojson pt(Point2 p) { return ojson::array({p.x, p.y}); }

ojson snapshot_json(const SessionSnapshot& s, const Scenario& sc) {
  ojson j;
  j["id"] = s.id;
  j["status"] = status_name(s.status);
  j["tick"] = s.tick;
  j["t"] = s.state.t;
  j["x_p"] = pt(s.state.x_p);
  j["x_e"] = pt(s.state.x_e);
  j["held_heading"] = s.held_heading ? pt(*s.held_heading) : ojson(nullptr);
  j["frames"] = s.frames;
  j["boundary_version"] = s.boundary_version;
  j["capture_bound"] = s.capture_bound;
  j["t_f"] = s.t_f ? ojson(*s.t_f) : ojson(nullptr);
  j["dt"] = sc.config.dt;
  j["alpha"] = sc.config.alpha;
  j["tick_rate"] = sc.session.tick_rate;
  j["world"] = world_to_json(sc.config.world);
  j["evader_policy"] = policy_name(sc.config.evader);
  j["pursuer_strategy"] = strategy_name(sc.config.pursuer);
  return j;
}

ojson boundary_json(const WireBoundary& b) {
  ojson arcs = ojson::array();
  ojson poly = ojson::array();
  for (const auto& a : b.arcs) {
    ojson pts = ojson::array();
    for (Point2 p : a.points) {
      pts.push_back(pt(p));
      poly.push_back(pt(p));
    }
    arcs.push_back({{"type", a.type}, {"points", std::move(pts)}});
  }
  ojson j;
  j["version"] = b.version;
  j["method"] = b.method;
  j["arcs"] = std::move(arcs);
  j["polyline"] = std::move(poly);
  return j;
}

// Body is either a bare JSON payload or one length-delimited message.
WireMessage read_message(const std::string& body) {
  if (!body.empty() && body[0] >= '0' && body[0] <= '9') {
    MessageReader reader;
    const auto payloads = reader.feed(body);
    if (payloads.size() != 1 || !reader.idle()) throw ParseError("expected exactly one message");
    return decode_payload(payloads[0]);
  }
  return decode_payload(body);
}

}  // namespace

struct Service::Impl {
  httplib::Server server;
  bool paced = true;
  std::atomic<bool> bound{false};
};

Service::Service(bool paced) : impl_(std::make_unique<Impl>()), sessions_(std::make_shared<SessionManager>()) {
  impl_->paced = paced;
  auto& srv = impl_->server;
  auto mgr = sessions_;
  const bool pace = paced;

  const auto with_session = [mgr](auto handler) {
    return [mgr, handler](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      auto s = mgr->find(id);
      if (!s) return send_error(res, 404, id, "unknown_session", "no session '" + id + "'");
      try {
        handler(*s, s, req, res);
      } catch (const ParseError& e) {
        send_error(res, 400, id, "bad_request", e.what());
      } catch (const Error& e) {
        send_error(res, 409, id, "rejected", e.what());
      }
    };
  };

  srv.Post("/sessions", [mgr, pace](const httplib::Request& req, httplib::Response& res) {
    try {
      auto body = nlohmann::json::parse(req.body);
      bool paced_here = pace;
      if (body.is_object() && body.contains("scenario")) {
        if (body.contains("paced") && body["paced"].is_boolean()) paced_here = pace && body["paced"].get<bool>();
        body = body["scenario"];
      }
      auto s = mgr->create(scenario_from_json(body), paced_here);
      ojson j = snapshot_json(s->snapshot(), s->scenario());
      j["boundary"] = boundary_json(s->boundary());
      send_json(res, j, 201);
    } catch (const nlohmann::json::parse_error& e) {
      send_error(res, 400, "", "bad_request", std::string("malformed JSON: ") + e.what());
    } catch (const Error& e) {
      send_error(res, 400, "", "bad_scenario", e.what());
    }
  });

  srv.Get("/sessions", [mgr](const httplib::Request&, httplib::Response& res) {
    send_json(res, ojson{{"sessions", mgr->ids()}});
  });

  srv.Get(R"(/sessions/([^/]+)/state)", with_session([](Session& s, auto, const httplib::Request&, httplib::Response& res) {
    send_json(res, snapshot_json(s.snapshot(), s.scenario()));
  }));

  srv.Get(R"(/sessions/([^/]+)/boundary)", with_session([](Session& s, auto, const httplib::Request& req, httplib::Response& res) {
    if (req.has_param("version")) {
      std::uint64_t v = 0;
      const std::string text = req.get_param_value("version");
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("version must be an integer");
      return send_json(res, boundary_json(s.boundary(v)));
    }
    send_json(res, boundary_json(s.boundary()));
  }));

  srv.Post(R"(/sessions/([^/]+)/heading)", with_session([](Session& s, auto, const httplib::Request& req, httplib::Response& res) {
    const WireMessage m = read_message(req.body);
    const auto* h = std::get_if<HeadingMessage>(&m);
    if (!h) throw ParseError("expected a heading message");
    if (!h->session.empty() && h->session != s.id())
      return send_error(res, 400, h->session, "session_mismatch", "message addressed to another session");
    const HeadingAck ack = s.set_heading(h->direction);
    ojson j;
    j["heading"] = pt(ack.heading);
    j["normalized"] = ack.normalized;
    j["warnings"] = ack.normalized ? ojson::array({"heading_normalized"}) : ojson::array();
    j["applies_at_tick"] = ack.applies_at_tick;
    j["client_time"] = h->client_time;
    send_json(res, j);
  }));

  srv.Post(R"(/sessions/([^/]+)/cursor)", with_session([](Session& s, auto, const httplib::Request& req, httplib::Response& res) {
    const WireMessage m = read_message(req.body);
    const auto* c = std::get_if<CursorMessage>(&m);
    if (!c) throw ParseError("expected a cursor message");
    s.set_cursor(c->point);
    send_json(res, ojson{{"ok", true}});
  }));

  srv.Post(R"(/sessions/([^/]+)/step)", with_session([](Session& s, auto, const httplib::Request& req, httplib::Response& res) {
    std::size_t n = 1;
    if (req.has_param("n")) {
      const std::string text = req.get_param_value("n");
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
      if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("n must be a non-negative integer");
    }
    const std::size_t produced = s.step(n);
    ojson j = snapshot_json(s.snapshot(), s.scenario());
    j["frames_produced"] = produced;
    send_json(res, j);
  }));

  srv.Get(R"(/sessions/([^/]+)/stream)", with_session([](Session&, std::shared_ptr<Session> sp, const httplib::Request& req, httplib::Response& res) {
    std::uint64_t from = 0;
    if (req.has_param("from")) {
      const std::string text = req.get_param_value("from");
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), from);
      if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("from must be an integer");
    }
    struct Cursor {
      std::uint64_t next;
      std::uint64_t sent_version = 0;
    };
    auto cur = std::make_shared<Cursor>(Cursor{from});
    res.set_chunked_content_provider(kFrames, [sp, cur](std::size_t, httplib::DataSink& sink) {
      if (!sink.is_writable()) return false;
      auto frames = sp->frames_since(cur->next, std::chrono::milliseconds(200));
      std::string out;
      bool terminal = false;
      for (auto& f : frames) {
        if (f.boundary_version != cur->sent_version) {
          f.boundary = sp->boundary(f.boundary_version);
          cur->sent_version = f.boundary_version;
        }
        out += encode_message(f);
        terminal = f.status != SessionStatus::Running;
        cur->next = f.seq + 1;
      }
      if (!out.empty() && !sink.write(out.data(), out.size())) return false;
      if (terminal || (frames.empty() && sp->finished())) sink.done();
      return true;
    });
  }));

  srv.Get(R"(/sessions/([^/]+)/inputs)", with_session([](Session& s, auto, const httplib::Request&, httplib::Response& res) {
    ojson list = ojson::array();
    for (const auto& r : s.inputs()) list.push_back({{"tick", r.tick}, {"heading", pt(r.heading)}});
    send_json(res, ojson{{"session", s.id()}, {"inputs", list}});
  }));

  srv.Get(R"(/sessions/([^/]+)/trajectory)", with_session([](Session& s, auto, const httplib::Request&, httplib::Response& res) {
    std::ostringstream os;
    write_trajectory_csv(os, s.trajectory());
    res.set_content(os.str(), "text/csv");
  }));

  srv.Get(R"(/sessions/([^/]+)/summary)", with_session([](Session& s, auto, const httplib::Request&, httplib::Response& res) {
    send_json(res, sim_summary_to_json(s.summary()));
  }));

  srv.Delete(R"(/sessions/([^/]+))", [mgr](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!mgr->remove(id)) return send_error(res, 404, id, "unknown_session", "no session '" + id + "'");
    send_json(res, ojson{{"deleted", id}});
  });
}

Service::~Service() { stop(); }

int Service::bind(const BindAddress& a) {
  int port = a.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(a.host);
    if (port < 0) throw Error("cannot bind " + a.host);
  } else if (!impl_->server.bind_to_port(a.host, port)) {
    throw Error("cannot bind " + a.host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return port;
}

void Service::run() {
  if (!impl_->bound) throw Error("service: bind() first");
  impl_->server.listen_after_bind();
}

int Service::start(const BindAddress& a) {
  const int port = bind(a);
  thread_ = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
  sessions_->stop_all();
}

}  // namespace pursuit
