#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fpp {

inline constexpr int kMaxDim = 4;

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// A vertex of Z^d, 2 <= d <= kMaxDim. Unused trailing coordinates stay 0.
class Point {
 public:
  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<int> coords);

  static Point unit(int dim, int axis);

  int dim() const { return dim_; }
  int operator[](int i) const { return coords_[i]; }
  int& operator[](int i) { return coords_[i]; }
  std::span<const int> coords() const {
    return {coords_.data(), static_cast<std::size_t>(dim_)};
  }

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator-() const;
  Point operator*(std::int64_t k) const;

  bool is_zero() const;
  std::string to_string() const;

  bool operator==(const Point&) const = default;
  auto operator<=>(const Point&) const = default;

 private:
  std::array<int, kMaxDim> coords_{};
  int dim_ = 0;
};

std::int64_t norm1(const Point& p);
std::int64_t norm_inf(const Point& p);

/// gcd of the coordinates is 1.
bool is_primitive(const Point& p);

/// The edge {endpoint, endpoint + e_axis}.
struct Edge {
  Point endpoint;
  int axis = 0;

  Point other() const { return endpoint + Point::unit(endpoint.dim(), axis); }
  bool operator==(const Edge&) const = default;
};

/// The box [-L, L]^d. Statistics only look at the inner box
/// [-(L - margin), L - margin]^d.
///
/// Vertices are numbered lexicographically (first coordinate most
/// significant). Edges are numbered axis-major: all axis-0 edges first, then
/// axis-1, ...; inside an axis block the endpoints run lexicographically.
class Box {
 public:
  Box() = default;
  /// margin < 0 selects the default margin L / 5.
  Box(int dim, int half_width, int margin = -1);

  int dim() const { return dim_; }
  int half_width() const { return half_width_; }
  int margin() const { return margin_; }
  int inner_half_width() const { return half_width_ - margin_; }
  int side() const { return 2 * half_width_ + 1; }

  std::uint64_t n_vertices() const { return n_vertices_; }
  std::uint64_t n_edges() const { return n_edges_; }
  std::uint64_t n_inner_vertices() const;

  bool contains(const Point& p) const;
  bool in_inner(const Point& p) const;

  VertexId vertex_index(const Point& p) const;
  Point vertex_at(VertexId v) const;
  VertexId origin() const { return vertex_index(Point(dim_)); }

  EdgeId edge_index(const Edge& e) const;
  Edge edge_at(EdgeId id) const;

  /// Offset added to a vertex id to move by +e_axis.
  std::uint64_t vertex_stride(int axis) const { return vstride_[axis]; }

  /// Calls fn(edge_id, tail_vertex, axis) for every edge in edge_index order.
  template <typename Fn>
  void for_each_edge(Fn&& fn) const;

  bool operator==(const Box&) const = default;

 private:
  int dim_ = 0;
  int half_width_ = 0;
  int margin_ = 0;
  std::uint64_t n_vertices_ = 0;
  std::uint64_t n_edges_ = 0;
  std::array<std::uint64_t, kMaxDim> vstride_{};
  std::array<std::uint64_t, kMaxDim> block_offset_{};
  // block_stride_[a][i]: stride of shifted coordinate i inside axis-a block
  std::array<std::array<std::uint64_t, kMaxDim>, kMaxDim> block_stride_{};
};

EdgeId edge_index(const Edge& e, const Box& b);

/// Exact rational r = num / den with den > 0, reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double to_double() const { return static_cast<double>(num) / den; }
  std::string to_string() const;
  bool operator==(const Rational&) const = default;
};

Rational operator*(const Rational& a, const Rational& b);
Rational operator+(const Rational& a, const Rational& b);

using RationalPoint2 = std::array<Rational, 2>;

/// Boundary of the l1 ball of radius r in the plane, `resolution` evenly
/// spaced points per quadrant (4 * resolution points in total).
std::vector<RationalPoint2> diamond_boundary_points(Rational r, int dim,
                                                    int resolution = 4);

template <typename Fn>
void Box::for_each_edge(Fn&& fn) const {
  const std::uint64_t side_u = static_cast<std::uint64_t>(side());
  EdgeId id = 0;
  for (int a = 0; a < dim_; ++a) {
    std::array<std::uint64_t, kMaxDim> s{};
    std::array<std::uint64_t, kMaxDim> extent{};
    for (int i = 0; i < dim_; ++i) extent[i] = (i == a) ? side_u - 1 : side_u;
    const std::uint64_t count = n_edges_ == 0 ? 0 : extent[0] * (block_stride_[a][0]);
    std::uint64_t v = 0;
    for (std::uint64_t r = 0; r < count; ++r) {
      fn(id++, static_cast<VertexId>(v), a);
      // odometer increment, last coordinate fastest
      for (int i = dim_ - 1; i >= 0; --i) {
        if (++s[i] < extent[i]) {
          v += vstride_[i];
          break;
        }
        v -= (s[i] - 1) * vstride_[i];
        s[i] = 0;
      }
    }
  }
}

}  // namespace fpp
