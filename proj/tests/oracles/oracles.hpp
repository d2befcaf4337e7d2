#pragma once

// Test-side reference implementations, written without the library: convex
// obstacle clipping, a visibility graph with Dijkstra, and the shortest-path
// race that decides whether the evader reaches a point strictly first.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct Pt {
  double x = 0.0, y = 0.0;
};

inline Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
inline Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }
inline Pt operator*(Pt a, double s) { return {a.x * s, a.y * s}; }
inline double dot(Pt a, Pt b) { return a.x * b.x + a.y * b.y; }
inline double len(Pt a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double dist(Pt a, Pt b) { return len(a - b); }

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Obstacles are convex counterclockwise polygons; `corners` are the vertices
/// a shortest path may bend at.
struct Scene {
  std::vector<std::vector<Pt>> obstacles;
  std::vector<Pt> corners;

  static Scene free_plane() { return {}; }

  /// The open wedge {|theta| < theta0}, truncated far away.
  static Scene wedge(double theta0, double reach = 1e4) {
    Scene s;
    s.obstacles.push_back({{0.0, 0.0},
                           {reach * std::cos(theta0), -reach * std::sin(theta0)},
                           {reach * std::cos(theta0), reach * std::sin(theta0)}});
    s.corners.push_back({0.0, 0.0});
    return s;
  }

  static Scene polygons(const std::vector<std::vector<Pt>>& polys) {
    Scene s;
    s.obstacles = polys;
    for (const auto& p : polys) s.corners.insert(s.corners.end(), p.begin(), p.end());
    return s;
  }

  // Largest signed distance of x outside the obstacle's supporting lines.
  static double outside_depth(const std::vector<Pt>& poly, Pt x) {
    double worst = -kInf;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Pt a = poly[i], b = poly[(i + 1) % poly.size()];
      const Pt e = b - a;
      const Pt n{e.y / len(e), -e.x / len(e)};
      worst = std::max(worst, dot(n, x - a));
    }
    return worst;
  }

  bool contains(Pt x) const {
    for (const auto& p : obstacles)
      if (outside_depth(p, x) < -1e-12) return false;
    return true;
  }

  /// Cyrus-Beck clip of [a, b] against each obstacle shrunk by a hair.
  bool clear(Pt a, Pt b) const {
    const Pt d = b - a;
    for (const auto& poly : obstacles) {
      double lo = 0.0, hi = 1.0;
      bool empty = false;
      for (std::size_t i = 0; i < poly.size() && !empty; ++i) {
        const Pt p = poly[i], q = poly[(i + 1) % poly.size()];
        const Pt e = q - p;
        const Pt n{e.y / len(e), -e.x / len(e)};
        const double num = dot(n, a - p) + 1e-9;  // n.(a + t d - p) <= -1e-9
        const double den = dot(n, d);
        if (den == 0.0) {
          if (num > 0.0) empty = true;
        } else if (den > 0.0) {
          hi = std::min(hi, -num / den);
        } else {
          lo = std::max(lo, -num / den);
        }
        if (lo >= hi) empty = true;
      }
      if (!empty && hi - lo > 1e-12) return false;
    }
    return true;
  }
};

/// Single-source distances over the visibility graph.
struct Field {
  const Scene* scene = nullptr;
  Pt source;
  std::vector<double> d;
  std::vector<int> prev;  // -1 = straight from the source

  Field(const Scene& s, Pt src) : scene(&s), source(src) {
    const std::size_t n = s.corners.size();
    d.assign(n, kInf);
    prev.assign(n, -1);
    std::vector<char> done(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (s.clear(src, s.corners[i])) d[i] = dist(src, s.corners[i]);
    for (std::size_t it = 0; it < n; ++it) {
      int u = -1;
      for (std::size_t i = 0; i < n; ++i)
        if (!done[i] && (u < 0 || d[i] < d[u])) u = static_cast<int>(i);
      if (u < 0 || d[u] == kInf) break;
      done[u] = 1;
      for (std::size_t v = 0; v < n; ++v) {
        if (done[v]) continue;
        const double w = d[u] + dist(s.corners[u], s.corners[v]);
        if (w < d[v] && s.clear(s.corners[u], s.corners[v])) {
          d[v] = w;
          prev[v] = u;
        }
      }
    }
  }

  double to(Pt x) const { return to_via(x, nullptr); }

  double to_via(Pt x, int* last) const {
    double best = scene->clear(source, x) ? dist(source, x) : kInf;
    if (last) *last = -1;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == kInf) continue;
      const double c = d[i] + dist(scene->corners[i], x);
      if (c < best && scene->clear(scene->corners[i], x)) {
        best = c;
        if (last) *last = static_cast<int>(i);
      }
    }
    return best;
  }

  /// Broken line source -> ... -> x.
  std::vector<Pt> path(Pt x) const {
    int last = -1;
    to_via(x, &last);
    std::vector<Pt> rev{x};
    for (int v = last; v >= 0; v = prev[v]) rev.push_back(scene->corners[v]);
    rev.push_back(source);
    return {rev.rbegin(), rev.rend()};
  }
};

/// The evader reaches x strictly before the pursuer can meet it anywhere on
/// the way: d(x_e, r) < d(x_p, r)/alpha at every sampled r on its shortest path.
inline bool race_reachable(const Field& from_p, const Field& from_e, double alpha, Pt x, double spacing) {
  const std::vector<Pt> path = from_e.path(x);
  double walked = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Pt a = path[k], b = path[k + 1];
    const double seg = dist(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(seg / spacing)));
    for (int j = 1; j <= steps; ++j) {
      const double s = static_cast<double>(j) / steps;
      const Pt r = a + (b - a) * s;
      if (!(walked + seg * s < from_p.to(r) / alpha)) return false;
    }
    walked += seg;
  }
  return true;
}

/// Widest bearing from the vertex, measured from the evader's bearing, at which
/// the ray still meets {|x| + |x_p| - alpha |x - x_e| >= 0}.
inline double tangent_half_angle(Pt x_p, Pt x_e, double alpha) {
  const double te = std::atan2(x_e.y, x_e.x);
  auto best_on_ray = [&](double eta) {
    const Pt u{std::cos(te + eta), std::sin(te + eta)};
    double lo = 0.0, hi = 10.0 * (len(x_e) + len(x_p));
    auto g = [&](double rho) { return rho + len(x_p) - alpha * dist(u * rho, x_e); };
    for (int i = 0; i < 300; ++i) {
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (g(m1) < g(m2)) lo = m1; else hi = m2;
    }
    return g(0.5 * (lo + hi));
  };
  double lo = 0.0, hi = 3.14159265358979323846;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (best_on_ray(mid) >= 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
