#pragma once

#include <span>
#include <vector>

namespace fpp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Convex polygon with counter-clockwise vertices, no collinear triples.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;

  /// Convex hull (Andrew's monotone chain).
  static ConvexPolygon hull(std::span<const Vec2> points);

  std::span<const Vec2> vertices() const { return vertices_; }
  bool empty() const { return vertices_.size() < 3; }

  /// h(n) = max over the polygon of <n, x>.
  double support(Vec2 n) const;

  /// Minkowski gauge: inf { s > 0 : x in s * polygon }. Requires the origin
  /// in the interior.
  double gauge(Vec2 x) const;

  bool contains(Vec2 x, double tol = 1e-12) const;
  double area() const;
  /// Checked on the stored vertices (strict left turns everywhere).
  bool is_convex() const;
  /// max over vertices of the distance from -v to the polygon, relative to
  /// the polygon's size; 0 for a centrally symmetric polygon.
  double asymmetry() const;

  ConvexPolygon scaled(double s) const;

  /// Outward edge normals (not normalised).
  std::vector<Vec2> edge_normals() const;

 private:
  std::vector<Vec2> vertices_;
};

/// Hausdorff distance between two convex bodies in the gauge of `unit`:
/// sup over directions n of |h_a(n) - h_b(n)| / h_unit(n), evaluated on
/// `resolution` evenly spaced directions plus every edge normal of the three
/// polygons.
double gauge_hausdorff(const ConvexPolygon& a, const ConvexPolygon& b,
                       const ConvexPolygon& unit, int resolution);

/// The l1 ball of radius r.
ConvexPolygon diamond(double r);

}  // namespace fpp
