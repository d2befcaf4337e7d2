#pragma once

// Playable region X, the shortest-path metric d_L on it, visibility and
// metric gradients for the three supported world kinds.

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pursuit/error.hpp"

namespace pursuit {

inline constexpr double kPi = 3.14159265358979323846;

/// Points within this distance of an obstacle edge count as boundary (inside X).
inline constexpr double kBoundaryTol = 1e-12;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2() = default;
  constexpr Point2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  constexpr Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  constexpr Point2 operator-() const { return {-x, -y}; }
  constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Point2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Point2& operator+=(Point2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Point2&) const = default;
};

constexpr Point2 operator*(double s, Point2 p) { return p * s; }
constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Unit vector along p. Throws DomainError for the zero vector.
Point2 normalized(Point2 p);

inline Point2 from_polar(double rho, double theta) {
  return {rho * std::cos(theta), rho * std::sin(theta)};
}

/// Counterclockwise rotation by angle.
inline Point2 rotated(Point2 p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

struct PolarPoint {
  double rho = 0.0;
  double theta = 0.0;
};

struct Polygon {
  std::vector<Point2> vertices;  // counterclockwise, not closed
};

struct FreePlane {};
struct CornerWedge {
  double theta0 = 0.0;  // half-angle of the excluded wedge (-theta0, theta0), radians
};
struct Polygons {
  std::vector<Polygon> obstacles;
};

struct ShortestPath {
  std::vector<Point2> waypoints;  // source first, target last
  double length = 0.0;
};

struct MetricGradients {
  Point2 grad1;  // d/dx1 d_L(x1, x2)
  Point2 grad2;  // d/dx2 d_L(x1, x2)
};

/// The playable region X. Immutable; copies share precomputed obstacle data.
class World {
 public:
  using Kind = std::variant<FreePlane, CornerWedge, Polygons>;

  World();  // free plane
  static World free_plane();
  static World corner_wedge(double theta0);
  static World polygons(std::vector<Polygon> obstacles);

  const Kind& kind() const;
  bool is_free_plane() const;
  bool is_corner() const;
  bool is_polygons() const;
  bool has_obstacles() const { return !is_free_plane(); }
  /// theta0 of a corner world; throws for the other kinds.
  double theta0() const;
  std::string kind_name() const;

  /// Obstacle vertices (the origin for a corner world).
  std::span<const Point2> vertices() const;

  /// True iff x is in the closed region X.
  bool contains(Point2 x) const;
  /// True iff the closed segment [a, b] lies in X. Both points must be in X.
  bool visible(Point2 a, Point2 b) const;
  /// Same test without the membership precondition.
  bool segment_clear(Point2 a, Point2 b) const;
  /// Polar coordinates with theta normalized to [theta0, 2pi - theta0].
  PolarPoint to_polar(Point2 x) const;

  /// Smallest parameter s in [0, 1] at which a + s(b - a) leaves X (1 if it never does),
  /// along with the unit tangent of the edge that blocks it.
  struct Exit {
    double s = 1.0;
    std::optional<Point2> edge_tangent;
    Point2 edge_a, edge_b;
  };
  Exit first_exit(Point2 a, Point2 b) const;

  /// Distance from x to the nearest obstacle edge (infinity in the free plane).
  double distance_to_obstacles(Point2 x) const;

  /// Pairwise vertex-to-vertex visibility (row-major, vertices().size() squared).
  const std::vector<char>& vertex_visibility() const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
  explicit World(std::shared_ptr<const Data> d);
};

/// Single-source shortest-path distances over the visibility graph. Queries to
/// arbitrary targets go through the best last vertex.
class DistanceField {
 public:
  DistanceField(const World& world, Point2 source);

  Point2 source() const { return source_; }
  double distance(Point2 x) const;
  ShortestPath path_to(Point2 x) const;

  /// One candidate route into x: either directly from the source or via a vertex.
  struct Hop {
    double length;
    Point2 from;  // previous waypoint on the route (source or a vertex)
  };
  /// Every candidate route into x, sorted by length. Empty if x is unreachable.
  std::vector<Hop> hops(Point2 x) const;

  const std::vector<double>& vertex_distances() const { return dist_; }

 private:
  World world_;
  Point2 source_;
  std::vector<double> dist_;
  std::vector<int> prev_;  // -1 means "from source"
};

double shortest_distance(const World& world, Point2 a, Point2 b);
ShortestPath shortest_path(const World& world, Point2 a, Point2 b);

/// Closed-form corner-world distance: Euclidean when the polar angles differ by
/// at most pi, otherwise the route through the vertex.
double corner_distance_closed_form(double theta0, Point2 a, Point2 b);

/// Relative length tolerance used to declare two routes tied.
inline constexpr double kTieTol = 1e-9;

/// Gradients of d_L with respect to each argument. Throws NonDifferentiable at ties.
MetricGradients metric_gradients(const World& world, Point2 a, Point2 b);

/// Nearest point of segment [a, b] to p.
Point2 closest_on_segment(Point2 p, Point2 a, Point2 b);

bool point_in_polygon(const Polygon& poly, Point2 p);

}  // namespace pursuit
