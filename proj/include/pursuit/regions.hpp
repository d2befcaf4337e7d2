#pragma once

// Dominance regions D = {x : d_L(x, x_p) - alpha d_L(x, x_e) > l}, their
// boundary curves and the spliced corner-world curve used by the corner strategy.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pursuit/geometry.hpp"

namespace pursuit {

/// Locus |x - focus_p| = alpha |x - focus_e|.
struct ApolloniusCircle {
  Point2 focus_p;
  Point2 focus_e;
  double alpha = 2.0;

  Point2 center() const;
  double radius() const;
};

enum class OvalKind { FirstType, SecondType };

/// Cartesian oval {S : |P S| - alpha |Q S| = offset}, P = outer_focus, Q = inner_focus.
/// The kind follows the sign of the offset (FirstType for offset >= 0).
struct OvalCurve {
  OvalKind kind = OvalKind::FirstType;
  Point2 outer_focus;
  Point2 inner_focus;
  double alpha = 2.0;
  double offset = 0.0;

  static OvalCurve make(Point2 outer, Point2 inner, double alpha, double offset);
  /// |P S| - alpha |Q S| - offset; zero on the curve.
  double value(Point2 s) const;
  /// Whether the offset lies in the classical range for its kind:
  /// [0, |PQ|) for the first type, (-alpha |PQ|, 0) for the second.
  bool offset_in_classical_range() const;
};

/// Circle centred on an obstacle vertex (both shortest paths bend there).
struct CircleAtVertex {
  Point2 center;
  double radius = 0.0;
};

/// Numerically contoured piece with no closed-form curve attached.
struct Untyped {};

using ArcCurve = std::variant<ApolloniusCircle, OvalCurve, CircleAtVertex, Untyped>;

/// "apollonius", "oval", "vertex_circle" or "untyped".
std::string arc_type_name(const ArcCurve& c);

ApolloniusCircle apollonius_of(Point2 x_p, Point2 x_e, double alpha);

enum class Side { Inside, Boundary, Outside };

class DominanceRegion {
 public:
  DominanceRegion(World world, Point2 x_p, Point2 x_e, double alpha, double capture_radius = 0.0);

  const World& world() const { return world_; }
  Point2 pursuer() const { return x_p_; }
  Point2 evader() const { return x_e_; }
  double alpha() const { return alpha_; }
  double capture_radius() const { return l_; }
  /// d_L(x_p, x_e).
  double separation() const { return separation_; }

  double distance_to_pursuer(Point2 x) const;
  double distance_to_evader(Point2 x) const;

  /// d_L(x, x_p) - alpha d_L(x, x_e) - l. Throws OutsideWorld for x outside X.
  double phi(Point2 x) const;
  Side classify(Point2 x, double tol = 1e-9) const;

  /// Radius around x_e that contains the whole region.
  double outer_radius() const;
  /// Corner world with ||x_p|| < alpha ||x_e|| (vertex outside the region's closure).
  bool vertex_outside_closure() const;

 private:
  World world_;
  Point2 x_p_, x_e_;
  double alpha_, l_;
  double separation_;
  std::shared_ptr<const DistanceField> from_p_, from_e_;
};

double eta_m(Point2 x_p, Point2 x_e, double alpha);

/// Corner-world auxiliary set F(x_p, x_e): the Apollonius circle and the
/// second-type oval with foci {origin, x_e} spliced along the ray opposite x_p.
class FSet {
 public:
  enum class Branch { Apollonius, Oval };

  FSet(Point2 x_p, Point2 x_e, double alpha);

  Point2 pursuer() const { return x_p_; }
  Point2 evader() const { return x_e_; }
  double alpha() const { return alpha_; }
  double eta_m() const { return eta_m_; }

  bool in_sector(Point2 x) const;
  /// Which piece of f applies at x (decided by the angle relative to the seam).
  Branch branch(Point2 x) const;
  /// f(x); throws DomainError when x is outside the sector.
  double value(Point2 x) const;
  double value_unchecked(Point2 x) const;
  /// ||x|| + ||x_p|| - alpha ||x - x_e||: the oval's defining function.
  double oval_value(Point2 x) const;
  /// ||x - x_p|| - alpha ||x - x_e||: the circle's defining function.
  double circle_value(Point2 x) const;

  /// Unique point of the boundary of F on the ray from x_e along direction.
  Point2 ray_intersection(Point2 direction) const;

 private:
  Point2 x_p_, x_e_;
  double alpha_;
  double eta_m_;
  bool reflect_;       // evaluate in the frame where x_p has y >= 0
  double theta_p_;     // in [0, pi] in that frame
  double theta_e_;     // in [0, 2pi) in that frame
  double theta_e_abs_; // in [0, 2pi) in the original frame, for the sector test
};

double f_value(Point2 x_p, Point2 x_e, double alpha, Point2 x);

/// Unique boundary point on the ray {x_e + s direction : s > 0}. Free plane and
/// corner worlds (the latter through F, requiring the vertex outside the closure).
Point2 ray_boundary_intersection(const DominanceRegion& region, Point2 direction);

/// Boundary point on the ray from the corner vertex at bearing theta, for a
/// corner region whose closure contains the vertex (the region is star-shaped about it).
Point2 polar_boundary_point(const DominanceRegion& region, double theta);

struct BoundaryPoint {
  Point2 x;
  double residual = 0.0;  // phi at x
};

struct BoundaryArc {
  ArcCurve curve;
  std::string parameter;  // what param_lo/param_hi measure
  double param_lo = 0.0;
  double param_hi = 0.0;
  Point2 start;
  Point2 end;
  std::vector<BoundaryPoint> points;
};

struct BoundaryResult {
  std::string method;  // "ray", "polar" or "contour"
  std::vector<BoundaryArc> arcs;
  /// All arc points concatenated in order.
  std::vector<Point2> polyline() const;
};

/// Typed boundary for free-plane and corner regions; Untyped contour pieces
/// for polygon worlds.
BoundaryResult boundary_arcs(const DominanceRegion& region, int n_samples = 720);

/// Marching-squares extraction of phi = 0 on an adaptively refined grid over
/// the region's outer bound. Every returned vertex is root-polished.
std::vector<std::vector<Point2>> contour_zero_set(const DominanceRegion& region, int cells = 256, int refine = 4);

}  // namespace pursuit
