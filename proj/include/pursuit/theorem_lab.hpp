#pragma once

// Numerical checks of the dominance-region results: lemma inequalities,
// strategy properties, the obstacle counter-example and the target-defense
// decision. Every check is a deterministic function of its inputs and seed.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pursuit/engine.hpp"
#include "pursuit/regions.hpp"

namespace pursuit {

/// fail <=> worst_margin < -tolerance.
struct CheckReport {
  std::string id;
  std::size_t samples = 0;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool inconclusive = false;
  std::string witness;                  // inputs at the worst case
  std::map<std::string, double> stats;  // check-specific extras
};

CheckReport finish_report(CheckReport r);

// ---------------------------------------------------------------------------
// Free plane

/// Pairs on the boundary of D_l: cos(angle at x_p) >= cos(angle at x_e) - 1e-9,
/// and |d psi / d chi| <= 1 + 1e-6 along the curve.
CheckReport check_oval_angle_inequality(Point2 x_p, Point2 x_e, double alpha, double l, std::size_t n,
                                        std::uint64_t seed);

// ---------------------------------------------------------------------------
// Corner world (vertex outside the region closure)

/// Boundary points of D in a corner world, sampled by evader-centred rays.
std::vector<Point2> corner_boundary_samples(const World& world, Point2 x_p, Point2 x_e, double alpha,
                                            std::size_t n, std::uint64_t seed);

/// d2 d_L(x, x_e) . u_e - d2 d_L(x, x_p) . gamma*(u_e) >= -1e-9 for x on the boundary.
CheckReport check_gamma_star_cosine(const World& world, Point2 x_p, Point2 x_e, double alpha, std::size_t n,
                                    std::uint64_t seed);

/// d1 d_L(x_p, x_e) . d2 d_L(x, x_p) > 0 for x on the boundary, with per-case
/// counts (p/e visible or not, x on the circle or oval piece).
CheckReport check_increment_positive(const World& world, Point2 x_p, Point2 x_e, double alpha, std::size_t n,
                                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// Necessary condition and counter-example

/// min over pairs of d2 d_L(c1, x_p) . d2 d_L(c2, x_p) - d2 d_L(c1, x_e) . d2 d_L(c2, x_e).
/// Passes when the minimum is >= -1e-9 (the necessary condition holds).
CheckReport check_necessary_condition(const World& world, Point2 x_p, Point2 x_e, double alpha,
                                      const std::vector<std::pair<Point2, Point2>>& pairs);

struct Example5 {
  double theta0_deg = 5.0;
  Point2 x_p{4.0, 5.0};
  Point2 x_e{2.0, -1.0};
  double alpha = 1.5;
  World world() const;
  DominanceRegion region() const;
};

/// Pairs of points drawn from the arc of the boundary whose evader path bends at
/// the vertex and whose pursuer path is straight (arc AB of the example).
std::vector<std::pair<Point2, Point2>> example5_arc_ab_pairs(std::size_t n, std::uint64_t seed);

/// Two probes along E -> vertex -> C_i share the first-leg input, yet the
/// pursuer headings toward C_1 and C_2 differ by >= 1 degree.
CheckReport check_counterexample_divergence(double arc_separation_deg = 10.0);

/// Example 5 boundary structure: three arcs oval/apollonius/oval, junctions on
/// the extensions of E-O and P-O, end points on the obstacle edges.
CheckReport check_example5_structure();

// ---------------------------------------------------------------------------
// Boundary evolution

/// Along a recorded episode, compares the one-tick finite difference of
/// phi(x, t) at boundary points x of D(t) with
/// d2 d_L(x, x_p) . alpha u_p - alpha d2 d_L(x, x_e) . u_e.
CheckReport check_boundary_evolution_identity(const World& world, double alpha, const Trajectory& trajectory,
                                              std::size_t samples, std::uint64_t seed, double tol = 1e-3);

// ---------------------------------------------------------------------------
// Target defense

struct HalfPlane {
  Point2 normal;  // T = {x : normal . x >= offset}
  double offset = 0.0;
};
struct Disk {
  Point2 center;
  double radius = 0.0;
};
struct PolygonTarget {
  std::vector<Point2> vertices;
};
/// Complement of the closure of the initial dominance region.
struct RegionComplement {};

using TargetShape = std::variant<HalfPlane, Disk, PolygonTarget, RegionComplement>;

/// Union of shapes.
struct TargetRegion {
  std::vector<TargetShape> parts;
};

bool target_contains(const TargetRegion& target, const DominanceRegion& region, Point2 x);

enum class DefenseVerdict { GuaranteedDefense, NotCertified, GuaranteedBreachFreePlane };
std::string verdict_name(DefenseVerdict v);

struct DefenseResult {
  DefenseVerdict verdict = DefenseVerdict::NotCertified;
  double max_phi = 0.0;  // sup of phi over T found by the search
  Point2 argmax;
  bool intersects = false;
  std::string reason;
};

DefenseResult defense_decision(const World& world, Point2 x_p0, Point2 x_e0, double alpha, const TargetRegion& target);

// ---------------------------------------------------------------------------
// Metric checks

CheckReport check_metric_axioms(const World& world, std::size_t n, std::uint64_t seed);
CheckReport check_corner_closed_form(double theta0, std::size_t n, std::uint64_t seed);
/// Unit norm and central finite differences (step 1e-6) of metric_gradients.
CheckReport check_gradients(const World& world, std::size_t n, std::uint64_t seed);
/// Closed-form eta_m against a numerically located tangent from the vertex.
CheckReport check_eta_m_tangent(std::size_t n, std::uint64_t seed);
/// Interior waypoints of shortest paths are obstacle vertices.
CheckReport check_path_waypoints(const World& world, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Simulation-backed checks

struct SweepOptions {
  std::size_t configs = 10;
  std::size_t policies = 5;
  double dt = 1e-3;
};

/// delta* against random piecewise-constant evaders: capture within
/// (d0 - l)/(alpha - 1) * 1.01 + 2 dt, containment and closing rate.
std::vector<CheckReport> check_free_plane_guarantee(const SweepOptions& opt, std::uint64_t seed);

/// gamma* against boundary probes in random corner worlds with ||x_p|| < alpha ||x_e||.
std::vector<CheckReport> check_corner_guarantee(const SweepOptions& opt, std::uint64_t seed);

// ---------------------------------------------------------------------------

/// "free-plane", "corner", "counterexample", "metric" or "all".
std::vector<CheckReport> run_suite(const std::string& suite, std::uint64_t seed);
std::vector<std::string> suite_names();

}  // namespace pursuit
