#include "fpp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fpp/error.hpp"

namespace fpp {

ConvexPolygon ConvexPolygon::hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  ConvexPolygon poly;
  if (pts.size() < 3) {
    poly.vertices_ = pts;
    return poly;
  }
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p - h[k - 2]) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2& p = pts[i];
    while (k >= lower && cross(h[k - 1] - h[k - 2], p - h[k - 2]) <= 0) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  poly.vertices_ = std::move(h);
  return poly;
}

double ConvexPolygon::support(Vec2 n) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : vertices_) best = std::max(best, dot(n, v));
  return best;
}

double ConvexPolygon::gauge(Vec2 x) const {
  if (empty()) throw ValidationError("gauge of a degenerate polygon");
  // For an edge (a, b) with the origin strictly inside, the line through it is
  // { y : <n, y> = <n, a> } with <n, a> > 0; the gauge is the largest ratio.
  double g = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 b = vertices_[(i + 1) % n];
    const Vec2 normal{b.y - a.y, a.x - b.x};
    const double h = dot(normal, a);
    if (!(h > 0.0)) throw ValidationError("gauge requires the origin in the interior");
    g = std::max(g, dot(normal, x) / h);
  }
  return g;
}

bool ConvexPolygon::contains(Vec2 x, double tol) const {
  if (empty()) return false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 b = vertices_[(i + 1) % n];
    if (cross(b - a, x - a) < -tol) return false;
  }
  return true;
}

double ConvexPolygon::area() const {
  double s = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) s += cross(vertices_[i], vertices_[(i + 1) % n]);
  return 0.5 * s;
}

bool ConvexPolygon::is_convex() const {
  const std::size_t n = vertices_.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 b = vertices_[(i + 1) % n];
    const Vec2 c = vertices_[(i + 2) % n];
    if (cross(b - a, c - b) <= 0.0) return false;
  }
  return true;
}

double ConvexPolygon::asymmetry() const {
  if (empty()) return 0.0;
  const double scale = std::sqrt(std::abs(area()));
  double worst = 0.0;
  const std::size_t n = vertices_.size();
  for (const Vec2& v : vertices_) {
    const Vec2 m = v * -1.0;
    // distance from m to the polygon: 0 inside, else max signed edge distance
    double out = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = vertices_[i];
      const Vec2 b = vertices_[(i + 1) % n];
      const Vec2 e = b - a;
      const double len = std::hypot(e.x, e.y);
      out = std::max(out, -cross(e, m - a) / len);
    }
    worst = std::max(worst, out);
  }
  return scale > 0 ? worst / scale : 0.0;
}

ConvexPolygon ConvexPolygon::scaled(double s) const {
  ConvexPolygon p;
  p.vertices_.reserve(vertices_.size());
  for (const Vec2& v : vertices_) p.vertices_.push_back(v * s);
  return p;
}

std::vector<Vec2> ConvexPolygon::edge_normals() const {
  std::vector<Vec2> out;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 b = vertices_[(i + 1) % n];
    out.push_back({b.y - a.y, a.x - b.x});
  }
  return out;
}

double gauge_hausdorff(const ConvexPolygon& a, const ConvexPolygon& b,
                       const ConvexPolygon& unit, int resolution) {
  if (a.empty() || b.empty() || unit.empty()) {
    throw ValidationError("hausdorff distance of a degenerate polygon");
  }
  std::vector<Vec2> dirs;
  dirs.reserve(static_cast<std::size_t>(resolution) + 64);
  for (int k = 0; k < resolution; ++k) {
    const double th = 2.0 * std::numbers::pi * k / resolution;
    dirs.push_back({std::cos(th), std::sin(th)});
  }
  for (const ConvexPolygon* p : {&a, &b, &unit}) {
    for (const Vec2& n : p->edge_normals()) dirs.push_back(n);
  }
  double d = 0.0;
  for (const Vec2& n : dirs) {
    const double hu = unit.support(n);
    if (!(hu > 0.0)) throw ValidationError("unit body must contain the origin in its interior");
    d = std::max(d, std::abs(a.support(n) - b.support(n)) / hu);
  }
  return d;
}

ConvexPolygon diamond(double r) {
  const Vec2 pts[] = {{r, 0}, {0, r}, {-r, 0}, {0, -r}};
  return ConvexPolygon::hull(pts);
}

}  // namespace fpp
