#pragma once

// Explicit-Euler simulation of the simple-motion game with wall sliding,
// interpolated capture detection and per-tick invariant monitors.

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pursuit/regions.hpp"
#include "pursuit/strategies.hpp"

namespace pursuit {

struct MonitorToggles {
  bool containment = true;
  bool closing_rate = true;
};

struct SimConfig {
  World world;
  double alpha = 2.0;
  double capture_radius = 0.0;   // l; must be 0 with obstacles
  double dt = 1e-3;
  double t_max = 10.0;
  GameState initial;
  PursuerStrategy pursuer = FreeDeltaStar{};
  EvaderPolicy evader = StraightLine{{1.0, 0.0}};
  MonitorToggles monitors;
  double capture_epsilon = 1e-3; // capture threshold when l = 0
  int input_delay_steps = 0;     // pursuer sees u_e from this many ticks earlier
  bool stop_on_violation = false;
};

/// Row flags.
enum : std::uint32_t {
  kPursuerSlid = 1u << 0,
  kEvaderSlid = 1u << 1,
  kContainmentViolation = 1u << 2,
  kClosingRateViolation = 1u << 3,
  kNonAdmissibleInput = 1u << 4,
};

/// One tick: positions at t and the inputs applied on [t, t + dt).
/// The final row of a captured run sits at the capture instant.
struct TrajectoryRow {
  double t = 0.0;
  Point2 x_p, x_e;
  Point2 u_p, u_e;
  double separation = 0.0;  // d_L(x_p, x_e)
  std::uint32_t flags = 0;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
};

struct Captured {
  double t_f = 0.0;
};
struct TimedOut {};
struct MonitorViolation {
  std::string which;
  double t = 0.0;
  double magnitude = 0.0;
  std::string detail;
};
using SimOutcome = std::variant<Captured, TimedOut, MonitorViolation>;

std::string outcome_name(const SimOutcome& o);

struct MonitorReport {
  std::string name;
  std::size_t samples = 0;
  double worst = 0.0;      // largest observed excess over the nominal bound
  double tolerance = 0.0;
  double t_worst = 0.0;
  double worst_ratio = 0.0;  // largest excess / tolerance over all samples
  bool pass = true;
};

struct SimEvent {
  double t = 0.0;
  std::string what;
};

struct SimResult {
  Trajectory trajectory;
  SimOutcome outcome;
  double initial_separation = 0.0;  // d0 = d_L(x_p0, x_e0)
  double capture_threshold = 0.0;
  double capture_bound = 0.0;       // (d0 - l)/(alpha - 1)
  MonitorReport containment;
  MonitorReport closing_rate;
  std::vector<SimEvent> events;
};

struct StepFlags {
  bool pursuer_slid = false;
  bool evader_slid = false;
};

/// x_p += alpha u_p dt, x_e += u_e dt, each kept in X by sliding along the blocking edge.
GameState step(const GameState& s, Point2 u_p, Point2 u_e, double dt, const World& world, double alpha,
               StepFlags* flags = nullptr);

/// Moves x by displacement, sliding along the first obstacle edge met.
Point2 project_move(const World& world, Point2 x, Point2 displacement, bool* slid = nullptr);

double capture_threshold(const SimConfig& config);

/// (d0 - l)/(alpha - 1), the continuous-time capture-time bound.
double capture_time_bound(double d0, double l, double alpha);

/// Tick-by-tick driver behind run(); live sessions and replays use it directly.
/// Each advance() evaluates the evader input, then the pursuer's response to
/// that same-tick input, and integrates one step.
class Episode {
 public:
  explicit Episode(SimConfig config);

  bool finished() const { return finished_; }
  const SimOutcome& outcome() const { return outcome_; }
  const SimConfig& config() const { return config_; }
  const GameState& state() const { return state_; }
  long tick() const { return tick_; }
  const Trajectory& trajectory() const { return result_.trajectory; }
  const DominanceRegion& initial_region() const { return initial_region_; }
  const SimResult& partial() const { return result_; }

  /// HumanLive evader: heading held from the next tick on.
  void set_evader_heading(Point2 heading);
  std::optional<Point2> evader_heading() const { return evader_.held_heading(); }

  /// One tick. Returns the number of rows appended (0 once finished).
  std::size_t advance();

  /// Runs the monitors over the recorded trajectory and closes the result.
  SimResult finish();
  /// Monitors over the rows recorded so far, without advancing.
  SimResult summarize() const;

 private:
  SimConfig config_;
  DominanceRegion initial_region_;
  PursuerController pursuer_;
  EvaderController evader_;
  std::deque<Point2> delayed_;
  GameState state_;
  SimResult result_;
  SimOutcome outcome_ = TimedOut{};
  long tick_ = 0;
  long n_steps_ = 0;
  bool finished_ = false;
};

SimResult run(const SimConfig& config);

/// Default containment tolerance 10 (alpha + 1) dt.
double containment_tolerance(double alpha, double dt);

/// max over rows of -phi_initial(x_e(t)).
MonitorReport monitor_containment(const Trajectory& trajectory, const DominanceRegion& initial, double tol);

/// Per-tick finite difference of the separation against 1 - alpha.
MonitorReport monitor_closing_rate(const Trajectory& trajectory, double alpha, const World& world = World());

/// 1e-2 + (alpha + 1)^2 dt / (2 r): the second-order remainder of one Euler
/// step, r being the separation or, when the shortest path bends, the distance
/// from either player to the nearest bend.
double closing_rate_tolerance(const World& world, const TrajectoryRow& row, double dtau, double alpha);

}  // namespace pursuit
