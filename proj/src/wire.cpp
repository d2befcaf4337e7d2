#include "pursuit/wire.hpp"

#include <cmath>

#include "json.hpp"

#include "pursuit/io.hpp"

namespace pursuit {

using nlohmann::json;

std::string status_name(SessionStatus s) {
  switch (s) {
    case SessionStatus::Running: return "Running";
    case SessionStatus::Captured: return "Captured";
    case SessionStatus::TimedOut: return "TimedOut";
    case SessionStatus::Violation: return "Violation";
  }
  return "Running";
}

SessionStatus status_from_name(const std::string& n) {
  if (n == "Running") return SessionStatus::Running;
  if (n == "Captured") return SessionStatus::Captured;
  if (n == "TimedOut") return SessionStatus::TimedOut;
  if (n == "Violation") return SessionStatus::Violation;
  throw ParseError("unknown status '" + n + "'");
}

WireBoundary to_wire_boundary(const BoundaryResult& b, std::uint64_t version) {
  WireBoundary w;
  w.version = version;
  w.method = b.method;
  for (const auto& a : b.arcs) {
    WireArc arc{arc_type_name(a.curve), {}};
    for (const auto& p : a.points) arc.points.push_back(p.x);
    w.arcs.push_back(std::move(arc));
  }
  return w;
}

namespace {

// Minimal writer: keys in call order, numbers via %.17g.
class Writer {
 public:
  Writer() { out_ = "{"; }
  Writer& key(const char* k) {
    if (!first_) out_ += ',';
    first_ = false;
    out_ += '"';
    out_ += k;
    out_ += "\":";
    return *this;
  }
  Writer& str(const char* k, const std::string& v) {
    key(k);
    out_ += json(v).dump();
    return *this;
  }
  Writer& num(const char* k, double v) {
    if (!std::isfinite(v)) throw DomainError(std::string("wire: field '") + k + "' is not finite");
    key(k);
    out_ += format_number(v);
    return *this;
  }
  Writer& integer(const char* k, std::uint64_t v) {
    key(k);
    out_ += std::to_string(v);
    return *this;
  }
  Writer& point(const char* k, Point2 p) {
    key(k);
    out_ += point_text(p);
    return *this;
  }
  Writer& null(const char* k) {
    key(k);
    out_ += "null";
    return *this;
  }
  Writer& raw(const char* k, const std::string& text) {
    key(k);
    out_ += text;
    return *this;
  }
  std::string done() { return out_ + "}"; }

  static std::string point_text(Point2 p) {
    if (!is_finite(p)) throw DomainError("wire: point is not finite");
    return "[" + format_number(p.x) + "," + format_number(p.y) + "]";
  }

 private:
  std::string out_;
  bool first_ = true;
};

std::string boundary_text(const WireBoundary& b) {
  Writer w;
  w.integer("version", b.version).str("method", b.method);
  std::string arcs = "[";
  for (std::size_t i = 0; i < b.arcs.size(); ++i) {
    if (i) arcs += ',';
    std::string pts = "[";
    for (std::size_t k = 0; k < b.arcs[i].points.size(); ++k) {
      if (k) pts += ',';
      pts += Writer::point_text(b.arcs[i].points[k]);
    }
    pts += "]";
    Writer a;
    a.str("type", b.arcs[i].type).raw("points", pts);
    arcs += a.done();
  }
  arcs += "]";
  w.raw("arcs", arcs);
  return w.done();
}

const json& field(const json& j, const char* k) {
  if (!j.contains(k)) throw ParseError(std::string("wire: missing field '") + k + "'");
  return j.at(k);
}

double num_field(const json& j, const char* k) {
  const json& v = field(j, k);
  if (!v.is_number()) throw ParseError(std::string("wire: field '") + k + "' must be a number");
  return v.get<double>();
}

std::string str_field(const json& j, const char* k) {
  const json& v = field(j, k);
  if (!v.is_string()) throw ParseError(std::string("wire: field '") + k + "' must be a string");
  return v.get<std::string>();
}

Point2 to_point(const json& v, const char* k) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ParseError(std::string("wire: field '") + k + "' must be [x, y]");
  const Point2 p{v[0].get<double>(), v[1].get<double>()};
  if (!is_finite(p)) throw ParseError(std::string("wire: field '") + k + "' is not finite");
  return p;
}

Point2 point_field(const json& j, const char* k) { return to_point(field(j, k), k); }

std::uint64_t uint_field(const json& j, const char* k) {
  const json& v = field(j, k);
  if (!v.is_number_unsigned()) throw ParseError(std::string("wire: field '") + k + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

std::string encode_payload(const FrameMessage& m) {
  Writer w;
  w.str("type", "frame").str("session", m.session).integer("seq", m.seq).num("t", m.t);
  w.str("status", status_name(m.status));
  w.point("x_p", m.x_p).point("x_e", m.x_e).point("u_p", m.u_p).point("u_e", m.u_e);
  w.num("separation", m.separation);
  if (m.phi_cursor) w.num("phi_cursor", *m.phi_cursor);
  else w.null("phi_cursor");
  w.num("capture_bound", m.capture_bound).integer("flags", m.flags);
  w.raw("warnings", json(m.warnings).dump());
  w.integer("boundary_version", m.boundary_version);
  if (m.boundary) w.raw("boundary", boundary_text(*m.boundary));
  return w.done();
}

std::string encode_payload(const HeadingMessage& m) {
  Writer w;
  w.str("type", "heading").str("session", m.session).point("direction", m.direction).num("client_time", m.client_time);
  return w.done();
}

std::string encode_payload(const CursorMessage& m) {
  Writer w;
  w.str("type", "cursor").str("session", m.session);
  if (m.point) w.point("point", *m.point);
  else w.null("point");
  return w.done();
}

std::string encode_payload(const ErrorMessage& m) {
  Writer w;
  w.str("type", "error").str("session", m.session).str("code", m.code).str("message", m.message);
  return w.done();
}

std::string encode_payload(const WireMessage& m) {
  return std::visit([](const auto& x) { return encode_payload(x); }, m);
}

WireMessage decode_payload(const std::string& payload) {
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("wire: malformed payload: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("wire: payload must be an object");
  const std::string type = str_field(j, "type");
  if (type == "frame") {
    FrameMessage m;
    m.session = str_field(j, "session");
    m.seq = uint_field(j, "seq");
    m.t = num_field(j, "t");
    m.status = status_from_name(str_field(j, "status"));
    m.x_p = point_field(j, "x_p");
    m.x_e = point_field(j, "x_e");
    m.u_p = point_field(j, "u_p");
    m.u_e = point_field(j, "u_e");
    m.separation = num_field(j, "separation");
    if (!field(j, "phi_cursor").is_null()) m.phi_cursor = num_field(j, "phi_cursor");
    m.capture_bound = num_field(j, "capture_bound");
    m.flags = static_cast<std::uint32_t>(uint_field(j, "flags"));
    const json& warn = field(j, "warnings");
    if (!warn.is_array()) throw ParseError("wire: field 'warnings' must be a list");
    for (const auto& s : warn) {
      if (!s.is_string()) throw ParseError("wire: warnings must be strings");
      m.warnings.push_back(s.get<std::string>());
    }
    m.boundary_version = uint_field(j, "boundary_version");
    if (j.contains("boundary")) {
      const json& b = j["boundary"];
      WireBoundary wb;
      wb.version = uint_field(b, "version");
      wb.method = str_field(b, "method");
      const json& arcs = field(b, "arcs");
      if (!arcs.is_array()) throw ParseError("wire: boundary arcs must be a list");
      for (const auto& a : arcs) {
        WireArc arc{str_field(a, "type"), {}};
        const json& pts = field(a, "points");
        if (!pts.is_array()) throw ParseError("wire: arc points must be a list");
        for (const auto& p : pts) arc.points.push_back(to_point(p, "points"));
        wb.arcs.push_back(std::move(arc));
      }
      m.boundary = std::move(wb);
    }
    for (double v : {m.t, m.separation, m.capture_bound})
      if (!std::isfinite(v)) throw ParseError("wire: non-finite number");
    return m;
  }
  if (type == "heading") {
    HeadingMessage m;
    m.session = str_field(j, "session");
    m.direction = point_field(j, "direction");
    m.client_time = j.contains("client_time") ? num_field(j, "client_time") : 0.0;
    return m;
  }
  if (type == "cursor") {
    CursorMessage m;
    m.session = str_field(j, "session");
    if (j.contains("point") && !j["point"].is_null()) m.point = point_field(j, "point");
    return m;
  }
  if (type == "error") return ErrorMessage{str_field(j, "session"), str_field(j, "code"), str_field(j, "message")};
  throw ParseError("wire: unknown message type '" + type + "'");
}

std::string frame_bytes(const std::string& payload) { return std::to_string(payload.size()) + "\n" + payload; }

std::vector<std::string> MessageReader::feed(const std::string& bytes) {
  buffer_ += bytes;
  std::vector<std::string> out;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl == std::string::npos) {
      if (buffer_.size() > 20) throw ParseError("wire: length prefix too long");
      break;
    }
    if (nl == 0 || nl > 20) throw ParseError("wire: bad length prefix");
    std::size_t len = 0;
    for (std::size_t i = 0; i < nl; ++i) {
      if (buffer_[i] < '0' || buffer_[i] > '9') throw ParseError("wire: bad length prefix");
      len = len * 10 + static_cast<std::size_t>(buffer_[i] - '0');
    }
    if (buffer_.size() < nl + 1 + len) break;
    out.push_back(buffer_.substr(nl + 1, len));
    buffer_.erase(0, nl + 1 + len);
  }
  return out;
}

}  // namespace pursuit
