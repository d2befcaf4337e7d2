#include "pursuit/session.hpp"

#include <cmath>

namespace pursuit {

namespace {

SessionStatus terminal_status(const SimOutcome& o) {
  if (std::holds_alternative<Captured>(o)) return SessionStatus::Captured;
  if (std::holds_alternative<TimedOut>(o)) return SessionStatus::TimedOut;
  return SessionStatus::Violation;
}

}  // namespace

Session::Session(std::string id, Scenario scenario)
    : id_(std::move(id)), scenario_(std::move(scenario)), episode_(scenario_.config) {
  initial_boundary_ = boundary_arcs(episode_.initial_region(), scenario_.boundary_samples);
  boundaries_[boundary_version_] = to_wire_boundary(initial_boundary_, boundary_version_);
}

HeadingAck Session::set_heading(Point2 direction) {
  if (!is_finite(direction)) throw DomainError("heading must be finite");
  std::lock_guard lock(mu_);
  if (!std::holds_alternative<HumanLive>(scenario_.config.evader))
    throw DomainError("session '" + id_ + "' has a scripted evader; headings are not accepted");
  if (episode_.finished()) throw DomainError("session '" + id_ + "' has finished");
  HeadingAck ack;
  const double n = norm(direction);
  ack.normalized = n > 0.0 && std::abs(n - 1.0) > 1e-9;
  episode_.set_evader_heading(direction);
  ack.heading = episode_.evader_heading().value_or(Point2{0.0, 0.0});
  ack.applies_at_tick = episode_.tick();
  inputs_.push_back({episode_.tick(), direction});
  if (ack.normalized) pending_warnings_.push_back("heading_normalized");
  return ack;
}

void Session::set_cursor(std::optional<Point2> point) {
  if (point && !is_finite(*point)) throw DomainError("cursor must be finite");
  std::lock_guard lock(mu_);
  cursor_ = point;
}

std::size_t Session::step(std::size_t n) {
  std::size_t produced = 0;
  {
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < n && !episode_.finished(); ++i) {
      const std::size_t before = episode_.trajectory().rows.size();
      episode_.advance();
      const int every = scenario_.session.boundary_refresh_ticks;
      if (every > 0 && !episode_.finished() && episode_.tick() % every == 0) refresh_boundary();
      emit_frames(before);
      produced += episode_.trajectory().rows.size() - before;
    }
  }
  cv_.notify_all();
  return produced;
}

void Session::refresh_boundary() {
  const GameState& s = episode_.state();
  const SimConfig& c = scenario_.config;
  try {
    const DominanceRegion region(c.world, s.x_p, s.x_e, c.alpha, c.capture_radius);
    const BoundaryResult b = boundary_arcs(region, scenario_.boundary_samples);
    ++boundary_version_;
    boundaries_[boundary_version_] = to_wire_boundary(b, boundary_version_);
  } catch (const Error&) {
    // Degenerate near capture; the previous boundary stays current.
  }
}

void Session::emit_frames(std::size_t from_row) {
  const auto& rows = episode_.trajectory().rows;
  const SimConfig& c = scenario_.config;
  const double bound = episode_.partial().capture_bound;
  for (std::size_t i = from_row; i < rows.size(); ++i) {
    const TrajectoryRow& r = rows[i];
    FrameMessage f;
    f.session = id_;
    f.seq = i;
    f.t = r.t;
    f.status = (episode_.finished() && i + 1 == rows.size()) ? terminal_status(episode_.outcome()) : SessionStatus::Running;
    f.x_p = r.x_p;
    f.x_e = r.x_e;
    f.u_p = r.u_p;
    f.u_e = r.u_e;
    f.separation = r.separation;
    if (cursor_ && c.world.contains(*cursor_))
      f.phi_cursor = shortest_distance(c.world, *cursor_, r.x_p) - c.alpha * shortest_distance(c.world, *cursor_, r.x_e) -
                     c.capture_radius;
    f.capture_bound = bound;
    f.flags = r.flags;
    if (i == from_row) {
      f.warnings = std::move(pending_warnings_);
      pending_warnings_.clear();
    }
    if (r.flags & kEvaderSlid) f.warnings.push_back("evader_slid");
    f.boundary_version = boundary_version_;
    frames_.push_back(std::move(f));
  }
}

bool Session::finished() const {
  std::lock_guard lock(mu_);
  return episode_.finished();
}

SessionSnapshot Session::snapshot() const {
  std::lock_guard lock(mu_);
  SessionSnapshot s;
  s.id = id_;
  s.tick = episode_.tick();
  s.state = episode_.state();
  s.status = episode_.finished() ? terminal_status(episode_.outcome()) : SessionStatus::Running;
  s.held_heading = episode_.evader_heading();
  s.frames = frames_.size();
  s.boundary_version = boundary_version_;
  s.capture_bound = episode_.partial().capture_bound;
  if (const auto* c = std::get_if<Captured>(&episode_.outcome()); c && episode_.finished()) s.t_f = c->t_f;
  return s;
}

std::vector<FrameMessage> Session::frames_since(std::uint64_t from, std::chrono::milliseconds wait) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, wait, [&] { return frames_.size() > from || episode_.finished(); });
  if (from >= frames_.size()) return {};
  return {frames_.begin() + static_cast<std::ptrdiff_t>(from), frames_.end()};
}

WireBoundary Session::boundary() const {
  std::lock_guard lock(mu_);
  return boundaries_.at(boundary_version_);
}

WireBoundary Session::boundary(std::uint64_t version) const {
  std::lock_guard lock(mu_);
  const auto it = boundaries_.find(version);
  if (it == boundaries_.end()) throw DomainError("unknown boundary version " + std::to_string(version));
  return it->second;
}

std::vector<InputRecord> Session::inputs() const {
  std::lock_guard lock(mu_);
  return inputs_;
}

Trajectory Session::trajectory() const {
  std::lock_guard lock(mu_);
  return episode_.trajectory();
}

SimResult Session::summary() const {
  std::lock_guard lock(mu_);
  SimResult r = episode_.summarize();
  if (!episode_.finished()) r.outcome = TimedOut{};
  return r;
}

Trajectory replay(const Scenario& scenario, const std::vector<InputRecord>& inputs) {
  Episode ep(scenario.config);
  std::size_t next = 0;
  while (!ep.finished()) {
    while (next < inputs.size() && inputs[next].tick <= ep.tick()) ep.set_evader_heading(inputs[next++].heading);
    ep.advance();
  }
  return ep.trajectory();
}

// ---------------------------------------------------------------------------

SessionManager::~SessionManager() { stop_all(); }

std::shared_ptr<Session> SessionManager::create(Scenario scenario, bool paced) {
  const double rate = scenario.session.tick_rate;
  std::string id;
  {
    std::lock_guard lock(mu_);
    id = "s" + std::to_string(next_id_++);
  }
  auto session = std::make_shared<Session>(id, std::move(scenario));
  Entry entry{session, {}};
  if (paced && rate > 0.0) {
    entry.pacer = std::jthread([session, rate](std::stop_token stop) {
      using clock = std::chrono::steady_clock;
      const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(1.0 / rate));
      std::mutex m;
      std::condition_variable_any cv;
      auto next = clock::now();
      while (!stop.stop_requested() && !session->finished()) {
        next += period;
        session->step(1);
        std::unique_lock lock(m);
        cv.wait_until(lock, stop, next, [] { return false; });
      }
    });
  }
  std::lock_guard lock(mu_);
  sessions_.emplace(id, std::move(entry));
  return session;
}

std::shared_ptr<Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second.session;
}

bool SessionManager::remove(const std::string& id) {
  Entry entry;
  {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    entry = std::move(it->second);
    sessions_.erase(it);
  }
  return true;  // the pacer joins as entry goes out of scope
}

std::vector<std::string> SessionManager::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, e] : sessions_) out.push_back(id);
  return out;
}

void SessionManager::stop_all() {
  std::map<std::string, Entry> all;
  {
    std::lock_guard lock(mu_);
    all.swap(sessions_);
  }
  all.clear();
}

}  // namespace pursuit
