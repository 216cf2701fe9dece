#include "fpp/lattice.hpp"

#include <cstdlib>
#include <numeric>

#include "fpp/error.hpp"

namespace fpp {

Point::Point(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw UnsupportedDimensionError("dimension must be in [1, " +
                                    std::to_string(kMaxDim) + "]");
  }
}

Point::Point(std::initializer_list<int> coords)
    : Point(static_cast<int>(coords.size())) {
  int i = 0;
  for (int c : coords) coords_[i++] = c;
}

Point Point::unit(int dim, int axis) {
  Point p(dim);
  p[axis] = 1;
  return p;
}

Point Point::operator+(const Point& o) const {
  Point r(*this);
  for (int i = 0; i < dim_; ++i) r.coords_[i] += o.coords_[i];
  return r;
}

Point Point::operator-(const Point& o) const {
  Point r(*this);
  for (int i = 0; i < dim_; ++i) r.coords_[i] -= o.coords_[i];
  return r;
}

Point Point::operator-() const {
  Point r(*this);
  for (int i = 0; i < dim_; ++i) r.coords_[i] = -r.coords_[i];
  return r;
}

Point Point::operator*(std::int64_t k) const {
  Point r(*this);
  for (int i = 0; i < dim_; ++i) {
    r.coords_[i] = static_cast<int>(k * r.coords_[i]);
  }
  return r;
}

bool Point::is_zero() const {
  for (int i = 0; i < dim_; ++i) {
    if (coords_[i] != 0) return false;
  }
  return true;
}

std::string Point::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ',';
    s += std::to_string(coords_[i]);
  }
  return s + ")";
}

std::int64_t norm1(const Point& p) {
  std::int64_t s = 0;
  for (int c : p.coords()) s += std::abs(static_cast<std::int64_t>(c));
  return s;
}

std::int64_t norm_inf(const Point& p) {
  std::int64_t s = 0;
  for (int c : p.coords()) s = std::max(s, std::abs(static_cast<std::int64_t>(c)));
  return s;
}

bool is_primitive(const Point& p) {
  int g = 0;
  for (int c : p.coords()) g = std::gcd(g, c);
  return g == 1;
}

Box::Box(int dim, int half_width, int margin)
    : dim_(dim), half_width_(half_width) {
  if (dim < 1 || dim > kMaxDim) {
    throw UnsupportedDimensionError("box dimension must be in [1, " +
                                    std::to_string(kMaxDim) + "]");
  }
  if (half_width < 1) throw ConfigError("box half-width must be positive");
  margin_ = margin < 0 ? half_width / 5 : margin;
  if (margin_ >= half_width) throw ConfigError("box margin must be < half-width");

  const std::uint64_t side_u = static_cast<std::uint64_t>(side());
  std::uint64_t stride = 1;
  for (int i = dim_ - 1; i >= 0; --i) {
    vstride_[i] = stride;
    stride *= side_u;
  }
  n_vertices_ = stride;

  std::uint64_t offset = 0;
  for (int a = 0; a < dim_; ++a) {
    std::uint64_t bs = 1;
    for (int i = dim_ - 1; i >= 0; --i) {
      block_stride_[a][i] = bs;
      bs *= (i == a) ? side_u - 1 : side_u;
    }
    block_offset_[a] = offset;
    offset += bs;
  }
  n_edges_ = offset;
}

std::uint64_t Box::n_inner_vertices() const {
  const std::uint64_t s = 2 * static_cast<std::uint64_t>(inner_half_width()) + 1;
  std::uint64_t n = 1;
  for (int i = 0; i < dim_; ++i) n *= s;
  return n;
}

bool Box::contains(const Point& p) const {
  if (p.dim() != dim_) return false;
  for (int c : p.coords()) {
    if (c < -half_width_ || c > half_width_) return false;
  }
  return true;
}

bool Box::in_inner(const Point& p) const {
  if (p.dim() != dim_) return false;
  const int r = inner_half_width();
  for (int c : p.coords()) {
    if (c < -r || c > r) return false;
  }
  return true;
}

VertexId Box::vertex_index(const Point& p) const {
  if (!contains(p)) throw OutOfBoxError("point " + p.to_string() + " outside box");
  std::uint64_t v = 0;
  for (int i = 0; i < dim_; ++i) {
    v += static_cast<std::uint64_t>(p[i] + half_width_) * vstride_[i];
  }
  return static_cast<VertexId>(v);
}

Point Box::vertex_at(VertexId v) const {
  if (v >= n_vertices_) throw OutOfBoxError("vertex id out of range");
  Point p(dim_);
  std::uint64_t rest = v;
  for (int i = 0; i < dim_; ++i) {
    p[i] = static_cast<int>(rest / vstride_[i]) - half_width_;
    rest %= vstride_[i];
  }
  return p;
}

EdgeId Box::edge_index(const Edge& e) const {
  if (e.axis < 0 || e.axis >= dim_) throw OutOfBoxError("edge axis out of range");
  if (!contains(e.endpoint) || e.endpoint[e.axis] >= half_width_) {
    throw OutOfBoxError("edge " + e.endpoint.to_string() + "+e" +
                        std::to_string(e.axis) + " leaves the box");
  }
  std::uint64_t r = block_offset_[e.axis];
  for (int i = 0; i < dim_; ++i) {
    r += static_cast<std::uint64_t>(e.endpoint[i] + half_width_) *
         block_stride_[e.axis][i];
  }
  return static_cast<EdgeId>(r);
}

Edge Box::edge_at(EdgeId id) const {
  if (id >= n_edges_) throw OutOfBoxError("edge id out of range");
  int a = dim_ - 1;
  while (block_offset_[a] > id) --a;
  std::uint64_t rest = id - block_offset_[a];
  Edge e{Point(dim_), a};
  for (int i = 0; i < dim_; ++i) {
    e.endpoint[i] = static_cast<int>(rest / block_stride_[a][i]) - half_width_;
    rest %= block_stride_[a][i];
  }
  return e;
}

EdgeId edge_index(const Edge& e, const Box& b) { return b.edge_index(e); }

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw ConfigError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num)
                  : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator*(const Rational& a, const Rational& b) {
  return {a.num * b.num, a.den * b.den};
}

Rational operator+(const Rational& a, const Rational& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}

std::vector<RationalPoint2> diamond_boundary_points(Rational r, int dim,
                                                    int resolution) {
  if (dim != 2) {
    throw UnsupportedDimensionError("diamond boundary is only defined for d = 2");
  }
  if (r.num <= 0) throw ConfigError("diamond radius must be positive");
  if (resolution < 1) throw ConfigError("diamond resolution must be >= 1");

  std::vector<RationalPoint2> out;
  out.reserve(4 * static_cast<std::size_t>(resolution));
  for (int quadrant = 0; quadrant < 4; ++quadrant) {
    for (int k = 0; k < resolution; ++k) {
      // first quadrant point r * (1 - k/n, k/n), then rotate by quarter turns
      Rational x = r * Rational(resolution - k, resolution);
      Rational y = r * Rational(k, resolution);
      for (int q = 0; q < quadrant; ++q) {
        Rational nx(-y.num, y.den);
        y = x;
        x = nx;
      }
      out.push_back({x, y});
    }
  }
  return out;
}

}  // namespace fpp
