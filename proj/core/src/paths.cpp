#include "fpp/paths.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <queue>

#include "fpp/io.hpp"

namespace fpp {

template <typename T>
std::string Extended<T>::to_string() const {
  if (!finite_) return "inf";
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(value_);
  } else {
    return std::to_string(value_);
  }
}

template class Extended<std::int64_t>;
template class Extended<double>;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Forward weights w[v * d + a] of the edge {v, v + e_a}; +inf when the edge
/// is closed or leaves the box. Moving by -e_a from v reads the forward
/// weight of v - stride_a, which is +inf whenever that step would wrap.
struct WeightedLattice {
  const Box& box;
  int dim;
  std::vector<double> w;

  WeightedLattice(const Environment& env, const PassageField& field)
      : box(env.box()), dim(env.box().dim()) {
    if (!(field.box() == env.box())) throw ValidationError("field and environment boxes differ");
    w.assign(box.n_vertices() * dim, kInf);
    box.for_each_edge([&](EdgeId e, VertexId tail, int axis) {
      if (env.is_open(e)) {
        const double t = field.time(e);
        if (!(t >= 0.0)) throw ValidationError("negative passage time");
        w[static_cast<std::size_t>(tail) * dim + axis] = t;
      }
    });
  }

  template <typename Fn>
  void for_each_neighbor(VertexId v, Fn&& fn) const {
    for (int a = 0; a < dim; ++a) {
      const std::uint64_t stride = box.vertex_stride(a);
      const double fw = w[static_cast<std::size_t>(v) * dim + a];
      if (fw != kInf) fn(static_cast<VertexId>(v + stride), fw);
      if (v >= stride) {
        const auto u = static_cast<VertexId>(v - stride);
        const double bw = w[static_cast<std::size_t>(u) * dim + a];
        if (bw != kInf) fn(u, bw);
      }
    }
  }
};

struct QueueItem {
  double time;
  std::int64_t hops;
  VertexId v;
  bool operator>(const QueueItem& o) const {
    if (time != o.time) return time > o.time;
    if (hops != o.hops) return hops > o.hops;
    return v > o.v;
  }
};

struct Sssp {
  std::vector<double> time;
  std::vector<std::int64_t> hops;
  std::vector<WetSet::Entry> order;
};

/// Dijkstra on (time, hops) keys. Stops after `target` is settled, or once
/// keys exceed horizon.
Sssp dijkstra(const WeightedLattice& g, VertexId source, double horizon,
              std::optional<VertexId> target = std::nullopt) {
  const std::size_t n = g.box.n_vertices();
  Sssp r;
  r.time.assign(n, kInf);
  r.hops.assign(n, -1);
  std::vector<std::uint8_t> done(n, 0);
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> pq;
  r.time[source] = 0.0;
  r.hops[source] = 0;
  pq.push({0.0, 0, source});
  while (!pq.empty()) {
    const QueueItem it = pq.top();
    pq.pop();
    if (done[it.v]) continue;
    if (it.time > horizon) break;
    done[it.v] = 1;
    r.order.push_back({it.v, it.time, it.hops});
    if (target && it.v == *target) break;
    g.for_each_neighbor(it.v, [&](VertexId u, double wt) {
      if (done[u]) return;
      const double t = it.time + wt;
      const std::int64_t h = it.hops + 1;
      if (t < r.time[u] || (t == r.time[u] && h < r.hops[u])) {
        r.time[u] = t;
        r.hops[u] = h;
        pq.push({t, h, u});
      }
    });
  }
  // Entries that were only tentatively labelled are not part of the result.
  for (std::size_t v = 0; v < n; ++v) {
    if (!done[v]) {
      r.time[v] = kInf;
      r.hops[v] = -1;
    }
  }
  return r;
}

}  // namespace

ChemicalDistance chemical_distance(const Environment& env, const Point& x, const Point& y) {
  const Box& box = env.box();
  const VertexId src = box.vertex_index(x);
  const VertexId dst = box.vertex_index(y);
  if (src == dst) return 0;
  if (env.label(src) != env.label(dst)) return ChemicalDistance::infinity();

  std::vector<std::int64_t> dist(box.n_vertices(), -1);
  std::deque<VertexId> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    const Point p = box.vertex_at(v);
    for (int a = 0; a < box.dim(); ++a) {
      for (int dir : {+1, -1}) {
        Point q = p;
        q[a] += dir;
        if (!box.contains(q)) continue;
        const Edge e = dir > 0 ? Edge{p, a} : Edge{q, a};
        if (!env.is_open(box.edge_index(e))) continue;
        const VertexId u = box.vertex_index(q);
        if (dist[u] >= 0) continue;
        dist[u] = dist[v] + 1;
        if (u == dst) return dist[u];
        queue.push_back(u);
      }
    }
  }
  return ChemicalDistance::infinity();
}

TravelTime travel_time(const Environment& env, const PassageField& field, const Point& x,
                       const Point& y) {
  const Box& box = env.box();
  const VertexId src = box.vertex_index(x);
  const VertexId dst = box.vertex_index(y);
  if (src == dst) return 0.0;
  if (env.label(src) != env.label(dst)) return TravelTime::infinity();
  const WeightedLattice g(env, field);
  const Sssp r = dijkstra(g, src, kInf, dst);
  if (r.time[dst] == kInf) return TravelTime::infinity();
  return r.time[dst];
}

TravelTime WetSet::time(VertexId v) const {
  if (hops_[v] < 0) return TravelTime::infinity();
  return time_[v];
}

ChemicalDistance WetSet::hops(VertexId v) const {
  if (hops_[v] < 0) return ChemicalDistance::infinity();
  return hops_[v];
}

std::size_t WetSet::count_within(double t) const {
  const auto it = std::upper_bound(order_.begin(), order_.end(), t,
                                   [](double x, const Entry& e) { return x < e.time; });
  return static_cast<std::size_t>(it - order_.begin());
}

WetSet wet_set(const Environment& env, const PassageField& field, const Point& source,
               double horizon) {
  if (horizon < 0.0 || std::isnan(horizon)) throw ConfigError("horizon must be >= 0");
  const WeightedLattice g(env, field);
  Sssp r = dijkstra(g, env.box().vertex_index(source), horizon);
  WetSet ws;
  ws.box_ = env.box();
  ws.source_ = source;
  ws.horizon_ = horizon;
  ws.order_ = std::move(r.order);
  ws.time_ = std::move(r.time);
  ws.hops_ = std::move(r.hops);
  return ws;
}

std::vector<Edge> geodesic(const Environment& env, const PassageField& field, const Point& x,
                           const Point& y) {
  const Box& box = env.box();
  const VertexId src = box.vertex_index(x);
  const VertexId dst = box.vertex_index(y);
  if (src == dst) return {};
  if (env.label(src) != env.label(dst)) {
    throw NoPathError("no open path between " + x.to_string() + " and " + y.to_string());
  }
  // Distances to y; then walk from x along optimal continuations, taking the
  // smallest edge index each step.
  const WeightedLattice g(env, field);
  const Sssp to_y = dijkstra(g, dst, kInf);

  std::vector<Edge> path;
  VertexId v = src;
  while (v != dst) {
    const Point p = box.vertex_at(v);
    std::optional<std::pair<EdgeId, VertexId>> best;
    for (int a = 0; a < box.dim(); ++a) {
      for (int dir : {+1, -1}) {
        Point q = p;
        q[a] += dir;
        if (!box.contains(q)) continue;
        const EdgeId e = box.edge_index(dir > 0 ? Edge{p, a} : Edge{q, a});
        if (!env.is_open(e)) continue;
        const VertexId u = box.vertex_index(q);
        if (to_y.hops[u] < 0) continue;
        if (to_y.time[u] + field.time(e) != to_y.time[v] || to_y.hops[u] + 1 != to_y.hops[v]) {
          continue;
        }
        if (!best || e < best->first) best = {e, u};
      }
    }
    if (!best) throw ValidationError("geodesic reconstruction failed");
    path.push_back(box.edge_at(best->first));
    v = best->second;
  }
  return path;
}

void write_wet_set_csv(std::ostream& os, const WetSet& ws) {
  const Box& box = ws.box();
  for (int i = 0; i < box.dim(); ++i) os << 'x' << (i + 1) << ',';
  os << "time,hops\n";
  for (const WetSet::Entry& e : ws.entries()) {
    const Point p = box.vertex_at(e.vertex);
    for (int c : p.coords()) os << c << ',';
    os << format_double(e.time) << ',' << e.hops << '\n';
  }
}

}  // namespace fpp
