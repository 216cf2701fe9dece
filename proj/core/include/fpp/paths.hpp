#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpp/environment.hpp"
#include "fpp/error.hpp"
#include "fpp/lattice.hpp"
#include "fpp/passage.hpp"

namespace fpp {

/// A value or +infinity. Infinity is an explicit tag, never a sentinel value.
template <typename T>
class Extended {
 public:
  constexpr Extended(T v) : value_(v), finite_(true) {}  // NOLINT(implicit)
  static constexpr Extended infinity() { return Extended(); }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_infinite() const { return !finite_; }
  T value() const {
    if (!finite_) throw NoPathError("value requested from an infinite distance");
    return value_;
  }

  constexpr bool operator==(const Extended& o) const {
    return finite_ == o.finite_ && (!finite_ || value_ == o.value_);
  }
  constexpr std::partial_ordering operator<=>(const Extended& o) const {
    if (!finite_ || !o.finite_) return o.finite_ <=> finite_;
    return value_ <=> o.value_;
  }

  std::string to_string() const;

 private:
  constexpr Extended() : value_{}, finite_(false) {}
  T value_;
  bool finite_;
};

using ChemicalDistance = Extended<std::int64_t>;
using TravelTime = Extended<double>;

/// Chemical distance D(x, y) by breadth-first search over open edges.
ChemicalDistance chemical_distance(const Environment& env, const Point& x, const Point& y);

/// Travel time d(x, y) by Dijkstra over open edges.
TravelTime travel_time(const Environment& env, const PassageField& field,
                       const Point& x, const Point& y);

/// B_t around a source: every vertex with d(source, .) <= horizon, with exact
/// times. hop_count is the edge count of the selected geodesic (fewest edges
/// among the time-optimal paths).
class WetSet {
 public:
  struct Entry {
    VertexId vertex;
    double time;
    std::int64_t hops;
  };

  const Box& box() const { return box_; }
  const Point& source() const { return source_; }
  double horizon() const { return horizon_; }

  std::size_t size() const { return order_.size(); }
  /// Reached vertices in settle order (nondecreasing time).
  std::span<const Entry> entries() const { return order_; }

  bool contains(VertexId v) const { return hops_[v] >= 0; }
  bool contains(const Point& p) const { return box_.contains(p) && contains(box_.vertex_index(p)); }
  TravelTime time(VertexId v) const;
  TravelTime time(const Point& p) const { return time(box_.vertex_index(p)); }
  ChemicalDistance hops(VertexId v) const;

  /// Number of reached vertices with time <= t (t <= horizon).
  std::size_t count_within(double t) const;

 private:
  friend WetSet wet_set(const Environment&, const PassageField&, const Point&, double);
  Box box_;
  Point source_;
  double horizon_ = 0.0;
  std::vector<Entry> order_;
  std::vector<double> time_;
  std::vector<std::int64_t> hops_;
};

WetSet wet_set(const Environment& env, const PassageField& field, const Point& source,
               double horizon = std::numeric_limits<double>::infinity());

/// An optimal path from x to y. Among optimal paths the fewest edges win, then
/// the lexically smallest sequence of edge indices (read from x to y).
std::vector<Edge> geodesic(const Environment& env, const PassageField& field,
                           const Point& x, const Point& y);

/// CSV rows x_1,...,x_d,time,hops in settle order.
void write_wet_set_csv(std::ostream& os, const WetSet& ws);

}  // namespace fpp
