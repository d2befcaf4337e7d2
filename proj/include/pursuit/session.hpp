#pragma once

// Live sessions: one Episode per session, advanced one tick per step request
// (by the wall-clock pacer or explicitly), with the human heading held between
// inputs. Every accepted heading is logged against the tick it first affects,
// so replay() reproduces the session trajectory exactly.

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pursuit/engine.hpp"
#include "pursuit/scenario.hpp"
#include "pursuit/wire.hpp"

namespace pursuit {

struct InputRecord {
  long tick = 0;  // applied before this tick is advanced
  Point2 heading;
};

struct HeadingAck {
  Point2 heading;  // as held (unit or zero)
  bool normalized = false;
  long applies_at_tick = 0;
};

struct SessionSnapshot {
  std::string id;
  long tick = 0;
  GameState state;
  SessionStatus status = SessionStatus::Running;
  std::optional<Point2> held_heading;
  std::uint64_t frames = 0;
  std::uint64_t boundary_version = 0;
  double capture_bound = 0.0;
  std::optional<double> t_f;
};

class Session {
 public:
  Session(std::string id, Scenario scenario);

  const std::string& id() const { return id_; }
  const Scenario& scenario() const { return scenario_; }

  /// Throws DomainError unless the evader is human_live and the session is running.
  HeadingAck set_heading(Point2 direction);
  void set_cursor(std::optional<Point2> point);

  /// Advances up to n ticks; returns the number of frames produced.
  std::size_t step(std::size_t n = 1);

  bool finished() const;
  SessionSnapshot snapshot() const;

  /// Frames with seq >= from. Waits up to `wait` when none are available yet
  /// and the session is still running.
  std::vector<FrameMessage> frames_since(std::uint64_t from, std::chrono::milliseconds wait) const;

  WireBoundary boundary() const;                 // latest version
  WireBoundary boundary(std::uint64_t version) const;
  BoundaryResult initial_boundary() const { return initial_boundary_; }

  std::vector<InputRecord> inputs() const;
  Trajectory trajectory() const;
  SimResult summary() const;

 private:
  void emit_frames(std::size_t from_row);
  void refresh_boundary();

  const std::string id_;
  const Scenario scenario_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  Episode episode_;
  BoundaryResult initial_boundary_;
  std::map<std::uint64_t, WireBoundary> boundaries_;
  std::uint64_t boundary_version_ = 1;
  std::vector<FrameMessage> frames_;
  std::vector<InputRecord> inputs_;
  std::vector<std::string> pending_warnings_;
  std::optional<Point2> cursor_;
};

/// Re-runs a scenario applying recorded headings at their ticks.
Trajectory replay(const Scenario& scenario, const std::vector<InputRecord>& inputs);

/// Owns sessions and their wall-clock pacers.
class SessionManager {
 public:
  SessionManager() = default;
  ~SessionManager();
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  /// Starts a pacer when the scenario's tick_rate is positive and `paced` is set.
  std::shared_ptr<Session> create(Scenario scenario, bool paced = true);
  std::shared_ptr<Session> find(const std::string& id) const;
  bool remove(const std::string& id);
  std::vector<std::string> ids() const;
  void stop_all();

 private:
  struct Entry {
    std::shared_ptr<Session> session;
    std::jthread pacer;
  };
  mutable std::mutex mu_;
  std::map<std::string, Entry> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace pursuit
