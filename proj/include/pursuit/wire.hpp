#pragma once

// Session wire protocol. Every message is "<decimal byte count>\n<payload>",
// the payload a JSON object with a fixed field order whose numbers are written
// with 17 significant digits, so a frame stream is reproducible byte for byte.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pursuit/geometry.hpp"
#include "pursuit/regions.hpp"

namespace pursuit {

enum class SessionStatus { Running, Captured, TimedOut, Violation };
std::string status_name(SessionStatus s);
SessionStatus status_from_name(const std::string& name);

struct WireArc {
  std::string type;  // arc_type_name of the curve
  std::vector<Point2> points;
};

/// Boundary polyline of one region, split by arc.
struct WireBoundary {
  std::uint64_t version = 0;
  std::string method;
  std::vector<WireArc> arcs;
};

WireBoundary to_wire_boundary(const BoundaryResult& b, std::uint64_t version);

struct FrameMessage {
  std::string session;
  std::uint64_t seq = 0;  // 0, 1, 2, ... within a session
  double t = 0.0;
  SessionStatus status = SessionStatus::Running;
  Point2 x_p, x_e;
  Point2 u_p, u_e;
  double separation = 0.0;
  std::optional<double> phi_cursor;
  double capture_bound = 0.0;
  std::uint32_t flags = 0;            // trajectory row flags
  std::vector<std::string> warnings;  // e.g. "heading_normalized"
  std::uint64_t boundary_version = 0;
  std::optional<WireBoundary> boundary;  // present when the version changed
};

/// Client -> server: new evader heading, held from the next tick on.
struct HeadingMessage {
  std::string session;
  Point2 direction;
  double client_time = 0.0;
};

/// Client -> server: point at which to report phi.
struct CursorMessage {
  std::string session;
  std::optional<Point2> point;  // nullopt clears the cursor
};

struct ErrorMessage {
  std::string session;
  std::string code;  // "unknown_session", "bad_request", ...
  std::string message;
};

using WireMessage = std::variant<FrameMessage, HeadingMessage, CursorMessage, ErrorMessage>;

std::string encode_payload(const FrameMessage& m);
std::string encode_payload(const HeadingMessage& m);
std::string encode_payload(const CursorMessage& m);
std::string encode_payload(const ErrorMessage& m);
std::string encode_payload(const WireMessage& m);

/// Throws ParseError for malformed or non-finite payloads.
WireMessage decode_payload(const std::string& payload);

/// Length prefix + payload.
std::string frame_bytes(const std::string& payload);
template <class M>
std::string encode_message(const M& m) {
  return frame_bytes(encode_payload(m));
}

/// Incremental splitter for a length-delimited byte stream.
class MessageReader {
 public:
  /// Appends bytes; returns every payload completed by them.
  std::vector<std::string> feed(const std::string& bytes);
  bool idle() const { return buffer_.empty(); }

 private:
  std::string buffer_;
};

}  // namespace pursuit
