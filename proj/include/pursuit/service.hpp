#pragma once

// HTTP front end for live sessions.
//
//   POST   /sessions                      scenario JSON -> {"id", ...}
//   GET    /sessions                      ids
//   GET    /sessions/{id}/state           snapshot
//   GET    /sessions/{id}/boundary        latest boundary polyline (?version=N)
//   POST   /sessions/{id}/heading         heading message (evader input)
//   POST   /sessions/{id}/cursor          cursor message (phi readout point)
//   POST   /sessions/{id}/step?n=K        advance unpaced sessions
//   GET    /sessions/{id}/stream?from=N   chunked length-delimited frames
//   GET    /sessions/{id}/inputs          recorded heading log
//   GET    /sessions/{id}/trajectory      trajectory CSV
//   GET    /sessions/{id}/summary         monitors and outcome
//   DELETE /sessions/{id}
//
// Errors come back as length-delimited error messages.

#include <memory>
#include <string>
#include <thread>

#include "pursuit/session.hpp"

namespace pursuit {

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// "host:port", ":port" or "port". Throws ParseError.
BindAddress parse_bind(const std::string& text);

class Service {
 public:
  /// paced = false leaves every session to explicit step requests.
  explicit Service(bool paced = true);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port.
  int bind(const BindAddress& address);
  /// Serves until stop(); requires bind().
  void run();
  /// bind() + run() on a background thread.
  int start(const BindAddress& address);
  void stop();

  SessionManager& sessions() { return *sessions_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::shared_ptr<SessionManager> sessions_;
  std::thread thread_;
};

}  // namespace pursuit
