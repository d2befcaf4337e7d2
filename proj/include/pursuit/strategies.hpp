#pragma once

// Pursuer feedback maps and evader input policies. Every map here reads only
// the present state, the evader's present input and (for the retrace
// interceptor) the evader's past positions, so non-anticipativity holds by
// construction.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pursuit/geometry.hpp"

namespace pursuit {

struct GameState {
  double t = 0.0;
  Point2 x_p;
  Point2 x_e;
};

struct ControlInput {
  Point2 direction;
  bool admissible = true;  // false for verification-only outputs (norm may differ from 1)
  bool slid = false;       // direction was projected onto an obstacle edge
};

// ---------------------------------------------------------------------------
// Pursuer

/// Unit vector from x_p toward the point where the evader's velocity ray meets
/// the boundary of D_l. A stationary evader is chased directly.
ControlInput gamma_free(Point2 x_p, Point2 x_e, Point2 u_e, double alpha, double l);

/// Corner-world strategy: toward the ray/F intersection while it lies on the
/// circle branch, toward the vertex while it lies on the oval branch. Throws
/// StrategyInapplicable unless ||x_p|| < alpha ||x_e||.
ControlInput gamma_star_corner(const World& world, Point2 x_p, Point2 x_e, Point2 u_e, double alpha);

/// gamma_star_corner minus epsilon times the pursuer-side gradient of d_L(x_p, x_e).
/// Norm up to 1 + epsilon; flagged non-admissible.
ControlInput gamma_eps_corner(const World& world, Point2 x_p, Point2 x_e, Point2 u_e, double alpha, double epsilon);

struct FreeDeltaStar {};
struct CornerGammaStar {};
struct CornerGammaEps {
  double epsilon = 1e-2;
};
/// Commit to a boundary point, wait there, then replay the evader's trail at speed alpha.
struct RetraceInterceptor {
  Point2 target;
};
/// Negative control: flees from the evader.
struct RunAway {};
/// Heads along the shortest path to the evader's present position; defined in every world.
struct PathChase {};

using PursuerStrategy =
    std::variant<FreeDeltaStar, CornerGammaStar, CornerGammaEps, RetraceInterceptor, RunAway, PathChase>;

std::string strategy_name(const PursuerStrategy& s);

/// Per-episode pursuer controller (owns the retrace interceptor's history).
class PursuerController {
 public:
  PursuerController(PursuerStrategy strategy, World world, double alpha, double capture_radius);

  /// Pursuer input at state given the evader's same-tick input. dt is the
  /// step about to be taken (used by the retrace interceptor to land exactly).
  ControlInput operator()(const GameState& state, Point2 u_e, double dt);

  const PursuerStrategy& strategy() const { return strategy_; }

  enum class RetracePhase { Approach, Wait, Retrace };
  RetracePhase retrace_phase() const { return phase_; }

 private:
  ControlInput retrace(const GameState& state, double dt);

  PursuerStrategy strategy_;
  World world_;
  double alpha_;
  double l_;
  // retrace interceptor
  std::vector<Point2> trail_;
  std::optional<std::size_t> cursor_;
  RetracePhase phase_ = RetracePhase::Approach;
  std::shared_ptr<const DistanceField> to_target_;
};

// ---------------------------------------------------------------------------
// Evader

struct StraightLine {
  Point2 direction;
};
/// Visit points in order; afterwards hold still or keep the last heading.
struct Waypoints {
  std::vector<Point2> points;
  bool hold_at_end = true;
};
/// Follow the shortest path to target, then hold.
struct BoundaryProbe {
  Point2 target;
};
/// Piecewise-constant headings: headings[i] is used on [switch_times[i], switch_times[i+1]).
struct Scripted {
  std::vector<double> switch_times;
  std::vector<Point2> headings;
};
/// Zero-order hold of the latest externally supplied heading; still before the first one.
struct HumanLive {};

using EvaderPolicy = std::variant<StraightLine, Waypoints, BoundaryProbe, Scripted, HumanLive>;

std::string policy_name(const EvaderPolicy& p);

class EvaderController {
 public:
  EvaderController(EvaderPolicy policy, World world);

  /// Evader input for the step of length dt starting at state. A direction that
  /// would carry the evader out of X is projected onto the blocking edge.
  ControlInput operator()(const GameState& state, double dt);

  /// HumanLive only: replace the held heading (normalized; zero keeps the evader still).
  void set_heading(Point2 heading);
  std::optional<Point2> held_heading() const { return held_; }

  const EvaderPolicy& policy() const { return policy_; }

 private:
  Point2 raw_direction(const GameState& state, double dt);

  EvaderPolicy policy_;
  World world_;
  std::size_t waypoint_ = 0;
  std::optional<Point2> last_heading_;
  std::optional<Point2> held_;
  std::shared_ptr<const DistanceField> to_target_;
};

/// Projects a unit heading at x so that a step of length step stays in X.
/// Returns the heading unchanged when unobstructed; otherwise the unit edge
/// tangent closest to it (zero when pushing straight into the wall).
ControlInput slide_heading(const World& world, Point2 x, Point2 heading, double step);

}  // namespace pursuit
