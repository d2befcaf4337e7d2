#include "pursuit/regions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "pursuit/roots.hpp"

namespace pursuit {

Point2 ApolloniusCircle::center() const {
  const double a2 = alpha * alpha;
  return (focus_e * a2 - focus_p) / (a2 - 1.0);
}

double ApolloniusCircle::radius() const {
  return alpha * distance(focus_p, focus_e) / (alpha * alpha - 1.0);
}

OvalCurve OvalCurve::make(Point2 outer, Point2 inner, double alpha, double offset) {
  return {offset >= 0.0 ? OvalKind::FirstType : OvalKind::SecondType, outer, inner, alpha, offset};
}

double OvalCurve::value(Point2 s) const {
  return distance(outer_focus, s) - alpha * distance(inner_focus, s) - offset;
}

bool OvalCurve::offset_in_classical_range() const {
  const double pq = distance(outer_focus, inner_focus);
  if (kind == OvalKind::FirstType) return offset >= 0.0 && offset < pq;
  return offset < 0.0 && offset > -alpha * pq;
}

std::string arc_type_name(const ArcCurve& c) {
  struct Namer {
    std::string operator()(const ApolloniusCircle&) const { return "apollonius"; }
    std::string operator()(const OvalCurve&) const { return "oval"; }
    std::string operator()(const CircleAtVertex&) const { return "vertex_circle"; }
    std::string operator()(const Untyped&) const { return "untyped"; }
  };
  return std::visit(Namer{}, c);
}

ApolloniusCircle apollonius_of(Point2 x_p, Point2 x_e, double alpha) {
  if (!(alpha > 1.0)) throw DomainError("apollonius_of: alpha must exceed 1");
  if (distance(x_p, x_e) == 0.0) throw DomainError("apollonius_of: coincident foci");
  return {x_p, x_e, alpha};
}

// ---------------------------------------------------------------------------

DominanceRegion::DominanceRegion(World world, Point2 x_p, Point2 x_e, double alpha, double capture_radius)
    : world_(std::move(world)), x_p_(x_p), x_e_(x_e), alpha_(alpha), l_(capture_radius) {
  if (!(alpha_ > 1.0) || !std::isfinite(alpha_)) throw DegenerateRegion("alpha must be a finite number > 1");
  if (!(l_ >= 0.0)) throw DegenerateRegion("capture radius must be >= 0");
  if (world_.has_obstacles() && l_ != 0.0) throw DegenerateRegion("capture radius must be 0 in worlds with obstacles");
  if (!world_.contains(x_p_) || !world_.contains(x_e_)) throw OutsideWorld("player position outside the playable region");
  if (world_.has_obstacles()) {
    from_p_ = std::make_shared<DistanceField>(world_, x_p_);
    from_e_ = std::make_shared<DistanceField>(world_, x_e_);
    separation_ = from_p_->distance(x_e_);
  } else {
    separation_ = distance(x_p_, x_e_);
  }
  if (!(separation_ > l_)) throw DegenerateRegion("d_L(x_p, x_e) must exceed the capture radius");
}

double DominanceRegion::distance_to_pursuer(Point2 x) const {
  return from_p_ ? from_p_->distance(x) : distance(x, x_p_);
}

double DominanceRegion::distance_to_evader(Point2 x) const {
  return from_e_ ? from_e_->distance(x) : distance(x, x_e_);
}

double DominanceRegion::phi(Point2 x) const {
  if (!world_.contains(x)) throw OutsideWorld("phi: point outside the playable region");
  return distance_to_pursuer(x) - alpha_ * distance_to_evader(x) - l_;
}

Side DominanceRegion::classify(Point2 x, double tol) const {
  const double v = phi(x);
  if (std::abs(v) <= tol) return Side::Boundary;
  return v > 0.0 ? Side::Inside : Side::Outside;
}

double DominanceRegion::outer_radius() const {
  // phi > 0 forces d_L(x, x_e) < (d0 - l) / (alpha - 1).
  return (separation_ + l_) / (alpha_ - 1.0);
}

bool DominanceRegion::vertex_outside_closure() const {
  return world_.is_corner() && norm(x_p_) < alpha_ * norm(x_e_);
}

// ---------------------------------------------------------------------------

double eta_m(Point2 x_p, Point2 x_e, double alpha) {
  const double rp = norm(x_p), re = norm(x_e);
  if (!(alpha > 1.0)) throw DomainError("eta_m: alpha must exceed 1");
  if (re == 0.0) throw DomainError("eta_m: evader at the vertex");
  if (rp > alpha * re) throw DomainError("eta_m: requires ||x_p|| <= alpha ||x_e||");
  const double a2 = alpha * alpha;
  const double c = (std::sqrt((a2 - 1.0) * (a2 * re * re - rp * rp)) - rp) / (a2 * re);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

FSet::FSet(Point2 x_p, Point2 x_e, double alpha) : x_p_(x_p), x_e_(x_e), alpha_(alpha) {
  if (!(alpha_ > 1.0)) throw DomainError("F set: alpha must exceed 1");
  if (!(norm(x_p_) < alpha_ * norm(x_e_))) throw DomainError("F set: requires ||x_p|| < alpha ||x_e||");
  eta_m_ = pursuit::eta_m(x_p_, x_e_, alpha_);
  reflect_ = x_p_.y < 0.0;
  const Point2 p = reflect_ ? Point2{x_p_.x, -x_p_.y} : x_p_;
  const Point2 e = reflect_ ? Point2{x_e_.x, -x_e_.y} : x_e_;
  theta_p_ = norm(p) > 0.0 ? std::atan2(p.y, p.x) : 0.0;
  theta_e_ = std::atan2(e.y, e.x);
  if (theta_e_ < 0.0) theta_e_ += 2.0 * kPi;
  theta_e_abs_ = std::atan2(x_e_.y, x_e_.x);
  if (theta_e_abs_ < 0.0) theta_e_abs_ += 2.0 * kPi;
}

bool FSet::in_sector(Point2 x) const {
  if (norm(x) == 0.0) return false;
  // Polar angles of X run over [theta0, 2pi - theta0]; the interval does not wrap through the wedge.
  double theta = std::atan2(x.y, x.x);
  if (theta < 0.0) theta += 2.0 * kPi;
  return std::abs(theta - theta_e_abs_) <= eta_m_ + 1e-12;
}

FSet::Branch FSet::branch(Point2 x) const {
  if (norm(x_p_) == 0.0) return Branch::Apollonius;
  const Point2 q = reflect_ ? Point2{x.x, -x.y} : x;
  const double omega = theta_e_ + wrap_angle(std::atan2(q.y, q.x) - theta_e_);
  return omega > theta_p_ + kPi ? Branch::Oval : Branch::Apollonius;
}

double FSet::circle_value(Point2 x) const { return distance(x, x_p_) - alpha_ * distance(x, x_e_); }

double FSet::oval_value(Point2 x) const { return norm(x) + norm(x_p_) - alpha_ * distance(x, x_e_); }

double FSet::value_unchecked(Point2 x) const {
  return branch(x) == Branch::Apollonius ? circle_value(x) : oval_value(x);
}

double FSet::value(Point2 x) const {
  if (!in_sector(x)) throw DomainError("f: point outside the sector G([theta_e - eta_m, theta_e + eta_m])");
  return value_unchecked(x);
}

Point2 FSet::ray_intersection(Point2 direction) const {
  const Point2 u = normalized(direction);
  const auto at = [&](double s) { return x_e_ + u * s; };
  // The ray meets the oval once; f <= 0 there and f > 0 at x_e.
  const double s_hi = (norm(x_e_) + norm(x_p_)) / (alpha_ - 1.0) * (1.0 + 1e-9) + 1e-9;
  if (!(oval_value(at(s_hi)) < 0.0)) throw BracketFailure("F ray: oval not bracketed");
  const double s_oval = bisect_root([&](double s) { return oval_value(at(s)); }, 0.0, s_hi);
  double s_end = s_oval;
  // Step just past the oval root so that f is non-positive at the bracket end.
  while (value_unchecked(at(s_end)) > 0.0) {
    s_end = s_end * (1.0 + 1e-15) + 1e-300;
    if (s_end > s_hi) throw BracketFailure("F ray: no sign change of f");
  }
  const double s = bisect_root([&](double t) { return value_unchecked(at(t)); }, 0.0, s_end);
  return at(s);
}

double f_value(Point2 x_p, Point2 x_e, double alpha, Point2 x) { return FSet(x_p, x_e, alpha).value(x); }

Point2 ray_boundary_intersection(const DominanceRegion& region, Point2 direction) {
  const Point2 u = normalized(direction);
  const World& w = region.world();
  if (w.is_free_plane()) {
    // |w + s u| = alpha s + l with w = x_e - x_p squares to a quadratic with one positive root.
    const Point2 xe = region.evader();
    const Point2 wv = xe - region.pursuer();
    const double a = region.alpha(), l = region.capture_radius();
    const double b = dot(wv, u) - a * l;
    const double c = dot(wv, wv) - l * l;
    const double k = a * a - 1.0;
    const double root = std::sqrt(b * b + k * c);
    const double s = b > 0.0 ? (b + root) / k : c / (root - b);
    if (!std::isfinite(s) || !(s > 0.0) || s > region.outer_radius() * (1.0 + 1e-9) + 1e-9)
      throw BracketFailure("ray_boundary_intersection: no boundary point within the outer bound");
    return xe + u * s;
  }
  if (w.is_corner()) {
    if (!region.vertex_outside_closure())
      throw BracketFailure("ray_boundary_intersection: corner vertex inside the region's closure");
    return FSet(region.pursuer(), region.evader(), region.alpha()).ray_intersection(u);
  }
  throw DomainError("ray_boundary_intersection: only free-plane and corner worlds are supported");
}

// ---------------------------------------------------------------------------

std::vector<Point2> BoundaryResult::polyline() const {
  std::vector<Point2> out;
  for (const auto& arc : arcs)
    for (const auto& p : arc.points) out.push_back(p.x);
  return out;
}

namespace {

BoundaryPoint make_point(const DominanceRegion& region, Point2 x) { return {x, region.phi(x)}; }

BoundaryResult free_plane_boundary(const DominanceRegion& region, int n) {
  BoundaryArc arc;
  if (region.capture_radius() == 0.0) {
    arc.curve = apollonius_of(region.pursuer(), region.evader(), region.alpha());
  } else {
    arc.curve = OvalCurve::make(region.pursuer(), region.evader(), region.alpha(), region.capture_radius());
  }
  arc.parameter = "evader_bearing";
  arc.param_lo = 0.0;
  arc.param_hi = 2.0 * kPi;
  for (int i = 0; i <= n; ++i) {
    const double chi = 2.0 * kPi * i / n;
    arc.points.push_back(make_point(region, ray_boundary_intersection(region, from_polar(1.0, chi))));
  }
  arc.start = arc.points.front().x;
  arc.end = arc.points.back().x;
  return {"ray", {std::move(arc)}};
}

// Corner world, vertex outside the closure: walk the F curve by evader bearing
// and keep the pieces that lie in X and are seen from x_e.
BoundaryResult corner_outside_boundary(const DominanceRegion& region, int n) {
  const FSet fset(region.pursuer(), region.evader(), region.alpha());
  const World& w = region.world();
  const Point2 xe = region.evader();
  struct Sample {
    double chi;
    Point2 x;
    int label;  // -1 invalid, 0 circle piece, 1 oval piece
  };
  const auto sample = [&](double chi) {
    const Point2 x = fset.ray_intersection(from_polar(1.0, chi));
    int label = -1;
    if (w.contains(x) && w.visible(xe, x)) label = fset.branch(x) == FSet::Branch::Apollonius ? 0 : 1;
    return Sample{chi, x, label};
  };
  std::vector<Sample> s;
  s.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s.push_back(sample(2.0 * kPi * i / n));

  // Rotate so that index 0 starts a run.
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i].label != s[(i + s.size() - 1) % s.size()].label) {
      start = i;
      break;
    }
  // Refine a label change between chi_a and chi_b (chi_b may exceed 2 pi).
  const auto refine = [&](const Sample& a, double chi_b) {
    double lo = a.chi, hi = chi_b;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (sample(mid).label == a.label ? lo : hi) = mid;
    }
    return std::pair{sample(lo), sample(hi)};
  };

  const auto make_curve = [&](int label) -> ArcCurve {
    if (label == 0) return apollonius_of(region.pursuer(), xe, region.alpha());
    return OvalCurve::make(Point2{0.0, 0.0}, xe, region.alpha(), -norm(region.pursuer()));
  };

  BoundaryResult result{"ray", {}};
  const std::size_t m = s.size();
  bool all_same = true;
  for (const auto& q : s) all_same = all_same && q.label == s[0].label;
  if (all_same) {
    if (s[0].label >= 0) {
      BoundaryArc arc;
      arc.curve = make_curve(s[0].label);
      arc.parameter = "evader_bearing";
      arc.param_lo = 0.0;
      arc.param_hi = 2.0 * kPi;
      for (const auto& q : s) arc.points.push_back(make_point(region, q.x));
      arc.points.push_back(arc.points.front());
      arc.start = arc.end = arc.points.front().x;
      result.arcs.push_back(std::move(arc));
    }
    return result;
  }

  std::size_t i = 0;
  while (i < m) {
    const Sample& first = s[(start + i) % m];
    std::size_t j = i;
    while (j + 1 < m && s[(start + j + 1) % m].label == first.label) ++j;
    if (first.label >= 0) {
      BoundaryArc arc;
      arc.curve = make_curve(first.label);
      arc.parameter = "evader_bearing";
      // Leading transition (from the previous run).
      const Sample& prev = s[(start + i + m - 1) % m];
      double prev_chi = prev.chi;
      if (prev_chi > first.chi) prev_chi -= 2.0 * kPi;
      Sample prev_shift = prev;
      prev_shift.chi = prev_chi;
      const Sample pb = refine(prev_shift, first.chi).second;
      arc.points.push_back(make_point(region, pb.x));
      arc.param_lo = pb.chi;
      double last_chi = pb.chi;
      for (std::size_t k = i; k <= j; ++k) {
        Sample q = s[(start + k) % m];
        while (q.chi < last_chi) q.chi += 2.0 * kPi;
        last_chi = q.chi;
        arc.points.push_back(make_point(region, q.x));
      }
      Sample last = s[(start + j) % m];
      last.chi = last_chi;
      const Sample& next = s[(start + j + 1) % m];
      double next_chi = next.chi;
      while (next_chi < last.chi) next_chi += 2.0 * kPi;
      const Sample na = refine(last, next_chi).first;
      arc.points.push_back(make_point(region, na.x));
      arc.param_hi = na.chi;
      arc.start = arc.points.front().x;
      arc.end = arc.points.back().x;
      result.arcs.push_back(std::move(arc));
    }
    i = j + 1;
  }
  return result;
}

}  // namespace

Point2 polar_boundary_point(const DominanceRegion& region, double theta) {
  const World& w = region.world();
  if (!w.is_corner()) throw DomainError("polar_boundary_point: corner world required");
  const Point2 u = from_polar(1.0, theta);
  if (!w.contains(u)) throw OutsideWorld("polar_boundary_point: bearing inside the obstacle");
  const double r_max = norm(region.evader()) + region.outer_radius() * (1.0 + 1e-9) + 1e-9;
  const auto f = [&](double r) { return region.phi(u * r); };
  const double at_vertex = f(0.0);
  if (at_vertex < 0.0) throw BracketFailure("polar_boundary_point: vertex outside the region closure");
  if (at_vertex == 0.0) return {0.0, 0.0};
  return u * bisect_root(f, 0.0, r_max);
}

namespace {

// Corner world with the vertex in the region's closure: the region is
// star-shaped about the vertex, so sweep the polar angle.
BoundaryResult corner_inside_boundary(const DominanceRegion& region, int n) {
  const World& w = region.world();
  const double th0 = w.theta0();
  const double lo = th0, hi = 2.0 * kPi - th0;
  const Point2 xp = region.pursuer(), xe = region.evader();
  const double tp = w.to_polar(xp).theta, te = w.to_polar(xe).theta;
  std::vector<double> breaks{lo, hi};
  const auto add_seams = [&](Point2 x, double t) {
    if (norm(x) == 0.0) return;
    for (double s : {t + kPi, t - kPi})
      if (s > lo && s < hi) breaks.push_back(s);
  };
  add_seams(xe, te);
  add_seams(xp, tp);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               breaks.end());


  const double rp = norm(xp), re = norm(xe), alpha = region.alpha();
  BoundaryResult result{"polar", {}};
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    const double mid = 0.5 * (a + b);
    const bool p_vis = rp == 0.0 || std::abs(mid - tp) <= kPi;
    const bool e_vis = re == 0.0 || std::abs(mid - te) <= kPi;
    BoundaryArc arc;
    if (p_vis && e_vis) arc.curve = apollonius_of(xp, xe, alpha);
    else if (p_vis) arc.curve = OvalCurve::make(xp, Point2{0.0, 0.0}, alpha, alpha * re);
    else if (e_vis) arc.curve = OvalCurve::make(Point2{0.0, 0.0}, xe, alpha, -rp);
    else arc.curve = CircleAtVertex{Point2{0.0, 0.0}, (rp - alpha * re) / (alpha - 1.0)};
    arc.parameter = "vertex_bearing";
    arc.param_lo = a;
    arc.param_hi = b;
    const int pieces = std::max(8, static_cast<int>(std::ceil(n * (b - a) / (hi - lo))));
    for (int i = 0; i <= pieces; ++i) {
      const double theta = (i == pieces) ? b : a + (b - a) * i / pieces;
      arc.points.push_back(make_point(region, polar_boundary_point(region, theta)));
    }
    arc.start = arc.points.front().x;
    arc.end = arc.points.back().x;
    result.arcs.push_back(std::move(arc));
  }
  return result;
}

}  // namespace

BoundaryResult boundary_arcs(const DominanceRegion& region, int n_samples) {
  if (n_samples < 8) n_samples = 8;
  const World& w = region.world();
  if (w.is_free_plane()) return free_plane_boundary(region, n_samples);
  if (w.is_corner()) {
    if (region.vertex_outside_closure()) return corner_outside_boundary(region, n_samples);
    return corner_inside_boundary(region, n_samples);
  }
  BoundaryResult result{"contour", {}};
  for (auto& chain : contour_zero_set(region)) {
    BoundaryArc arc;
    arc.curve = Untyped{};
    arc.parameter = "vertex_index";
    arc.param_lo = 0.0;
    arc.param_hi = static_cast<double>(chain.size() - 1);
    for (Point2 p : chain) arc.points.push_back(make_point(region, p));
    arc.start = chain.front();
    arc.end = chain.back();
    result.arcs.push_back(std::move(arc));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Marching squares

namespace {

struct GridSpec {
  Point2 origin;
  double h = 0.0;  // fine cell size
  long n = 0;      // fine cells per side
};

class PhiGrid {
 public:
  PhiGrid(const DominanceRegion& r, GridSpec g) : region_(r), g_(g) {}

  Point2 node(long i, long j) const { return g_.origin + Point2{g_.h * i, g_.h * j}; }

  double value(long i, long j) {
    const long key = i * (g_.n + 1) + j;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Point2 p = node(i, j);
    const double v = region_.world().contains(p) ? region_.phi(p) : std::nan("");
    cache_.emplace(key, v);
    return v;
  }

  const DominanceRegion& region() const { return region_; }

 private:
  const DominanceRegion& region_;
  GridSpec g_;
  std::unordered_map<long, double> cache_;
};

// Edge key: (node i, node j, 0 = horizontal to (i+1, j), 1 = vertical to (i, j+1)).
using EdgeKey = std::tuple<long, long, int>;

}  // namespace

std::vector<std::vector<Point2>> contour_zero_set(const DominanceRegion& region, int cells, int refine) {
  if (cells < 4) cells = 4;
  if (refine < 1) refine = 1;
  const double R = region.outer_radius() * 1.02 + 1e-6;
  const Point2 xe = region.evader();
  GridSpec g{xe - Point2{R, R}, 2.0 * R / (static_cast<double>(cells) * refine), static_cast<long>(cells) * refine};
  PhiGrid grid(region, g);
  const long r = refine;

  // Coarse cells with a sign change (or a NaN/number mix), dilated by one cell.
  std::vector<char> flag(static_cast<std::size_t>(cells) * cells, 0);
  for (long ci = 0; ci < cells; ++ci)
    for (long cj = 0; cj < cells; ++cj) {
      const double v[4] = {grid.value(ci * r, cj * r), grid.value((ci + 1) * r, cj * r),
                           grid.value((ci + 1) * r, (cj + 1) * r), grid.value(ci * r, (cj + 1) * r)};
      int pos = 0, neg = 0;
      for (double x : v) {
        if (std::isnan(x)) continue;
        (x > 0.0 ? pos : neg)++;
      }
      if (pos > 0 && (neg > 0 || pos < 4)) flag[static_cast<std::size_t>(ci * cells + cj)] = 1;
    }
  std::vector<char> active(flag.size(), 0);
  for (long ci = 0; ci < cells; ++ci)
    for (long cj = 0; cj < cells; ++cj) {
      if (!flag[static_cast<std::size_t>(ci * cells + cj)]) continue;
      for (long di = -1; di <= 1; ++di)
        for (long dj = -1; dj <= 1; ++dj) {
          const long a = ci + di, b = cj + dj;
          if (a >= 0 && b >= 0 && a < cells && b < cells) active[static_cast<std::size_t>(a * cells + b)] = 1;
        }
    }

  std::map<EdgeKey, Point2> crossing;
  const auto edge_point = [&](const EdgeKey& k) -> std::optional<Point2> {
    if (auto it = crossing.find(k); it != crossing.end()) return it->second;
    const auto [i, j, dir] = k;
    const long i2 = dir == 0 ? i + 1 : i, j2 = dir == 0 ? j : j + 1;
    const double va = grid.value(i, j), vb = grid.value(i2, j2);
    if (std::isnan(va) || std::isnan(vb) || (va > 0.0) == (vb > 0.0)) return std::nullopt;
    Point2 a = grid.node(i, j), b = grid.node(i2, j2);
    if (!(va > 0.0)) std::swap(a, b);
    bool ok = true;
    const auto f = [&](double s) {
      const Point2 p = a + (b - a) * s;
      if (!region.world().contains(p)) {
        ok = false;
        return -1.0;
      }
      return region.phi(p);
    };
    const double s = bisect_root(f, 0.0, 1.0);
    if (!ok) return std::nullopt;
    const Point2 p = a + (b - a) * s;
    crossing.emplace(k, p);
    return p;
  };

  // Segments as pairs of edge keys.
  std::vector<std::pair<EdgeKey, EdgeKey>> segments;
  for (long ci = 0; ci < cells; ++ci)
    for (long cj = 0; cj < cells; ++cj) {
      if (!active[static_cast<std::size_t>(ci * cells + cj)]) continue;
      for (long i = ci * r; i < (ci + 1) * r; ++i)
        for (long j = cj * r; j < (cj + 1) * r; ++j) {
          const double v0 = grid.value(i, j), v1 = grid.value(i + 1, j);
          const double v2 = grid.value(i + 1, j + 1), v3 = grid.value(i, j + 1);
          if (std::isnan(v0) || std::isnan(v1) || std::isnan(v2) || std::isnan(v3)) continue;
          const int code = (v0 > 0.0 ? 1 : 0) | (v1 > 0.0 ? 2 : 0) | (v2 > 0.0 ? 4 : 0) | (v3 > 0.0 ? 8 : 0);
          if (code == 0 || code == 15) continue;
          const EdgeKey bottom{i, j, 0}, right{i + 1, j, 1}, top{i, j + 1, 0}, left{i, j, 1};
          std::vector<EdgeKey> hit;
          for (const EdgeKey& e : {bottom, right, top, left})
            if (edge_point(e)) hit.push_back(e);
          if (hit.size() == 2) {
            segments.push_back({hit[0], hit[1]});
          } else if (hit.size() == 4) {
            const Point2 c = grid.node(i, j) + Point2{0.5 * g.h, 0.5 * g.h};
            const bool center_in = region.world().contains(c) && region.phi(c) > 0.0;
            // Saddle: pair edges so the centre's side stays connected.
            if ((code == 5) == center_in) {
              segments.push_back({bottom, left});
              segments.push_back({right, top});
            } else {
              segments.push_back({bottom, right});
              segments.push_back({top, left});
            }
          }
        }
    }

  // Chain segments through shared edge keys.
  std::map<EdgeKey, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);
  std::vector<std::vector<Point2>> chains;
  const auto other = [&](std::size_t s, const EdgeKey& k) {
    return segments[s].first == k ? segments[s].second : segments[s].first;
  };
  const auto walk = [&](std::size_t s0, EdgeKey from, std::vector<EdgeKey>& keys) {
    std::size_t s = s0;
    EdgeKey k = from;
    while (true) {
      used[s] = 1;
      k = other(s, k);
      keys.push_back(k);
      std::size_t next = segments.size();
      for (std::size_t t : incident[k])
        if (!used[t]) next = t;
      if (next == segments.size()) break;
      s = next;
    }
  };
  // Open chains first (start at keys with a single incident segment), then loops.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (used[s]) continue;
      EdgeKey start = segments[s].first;
      if (pass == 0) {
        if (incident[segments[s].first].size() == 1) start = segments[s].first;
        else if (incident[segments[s].second].size() == 1) start = segments[s].second;
        else continue;
      }
      std::vector<EdgeKey> keys{start};
      walk(s, start, keys);
      std::vector<Point2> chain;
      for (const auto& k : keys) chain.push_back(crossing.at(k));
      chains.push_back(std::move(chain));
    }
  }
  return chains;
}

}  // namespace pursuit
