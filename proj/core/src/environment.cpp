#include "fpp/environment.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "fpp/error.hpp"
#include "fpp/io.hpp"
#include "fpp/rng.hpp"

namespace fpp {

void EnvConfig::validate() const {
  if (box.dim() < 2) throw ConfigError("environment dimension must be >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
}

double edge_uniform(std::uint64_t seed, EdgeId e) {
  return counter_uniform(seed, kOpenStream, e);
}

namespace {

VertexId find_root(std::vector<VertexId>& parent, VertexId v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

Environment Environment::generate(const EnvConfig& cfg, std::uint64_t max_vertices) {
  cfg.validate();
  if (cfg.box.n_vertices() > max_vertices ||
      cfg.box.n_edges() >= std::numeric_limits<EdgeId>::max()) {
    throw CapacityError("box with " + std::to_string(cfg.box.n_vertices()) +
                        " vertices exceeds the memory budget of " +
                        std::to_string(max_vertices));
  }
  Environment env;
  env.cfg_ = cfg;
  const std::uint64_t n_edges = cfg.box.n_edges();
  env.open_.assign((n_edges + 63) / 64, 0);
  for (std::uint64_t e = 0; e < n_edges; ++e) {
    if (edge_uniform(cfg.seed, static_cast<EdgeId>(e)) < cfg.p) {
      env.open_[e >> 6] |= std::uint64_t{1} << (e & 63);
      ++env.n_open_;
    }
  }
  env.label_clusters();
  return env;
}

Environment Environment::from_open_bits(const EnvConfig& cfg,
                                        const std::vector<bool>& open) {
  cfg.validate();
  if (open.size() != cfg.box.n_edges()) {
    throw ConfigError("open bit vector does not match the box edge count");
  }
  Environment env;
  env.cfg_ = cfg;
  env.open_.assign((open.size() + 63) / 64, 0);
  for (std::size_t e = 0; e < open.size(); ++e) {
    if (open[e]) {
      env.open_[e >> 6] |= std::uint64_t{1} << (e & 63);
      ++env.n_open_;
    }
  }
  env.label_clusters();
  return env;
}

void Environment::label_clusters() {
  const Box& b = cfg_.box;
  const auto n = static_cast<std::size_t>(b.n_vertices());
  std::vector<VertexId> parent(n);
  for (std::size_t v = 0; v < n; ++v) parent[v] = static_cast<VertexId>(v);

  // Roots are always the smallest vertex of their set.
  b.for_each_edge([&](EdgeId e, VertexId tail, int axis) {
    if (!is_open(e)) return;
    const auto head = static_cast<VertexId>(tail + b.vertex_stride(axis));
    VertexId ra = find_root(parent, tail);
    VertexId rb = find_root(parent, head);
    if (ra == rb) return;
    if (ra < rb) {
      parent[rb] = ra;
    } else {
      parent[ra] = rb;
    }
  });

  labels_.resize(n);
  std::vector<std::uint32_t> size(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    labels_[v] = find_root(parent, static_cast<VertexId>(v));
    ++size[labels_[v]];
  }
  giant_.reset();
  giant_size_ = 0;
  for (std::size_t v = 0; v < n; ++v) {
    // v is a root iff labels_[v] == v; roots are visited in increasing order
    if (labels_[v] == v && size[v] >= 2 && size[v] > giant_size_) {
      giant_ = static_cast<VertexId>(v);
      giant_size_ = size[v];
    }
  }
}

bool same_cluster(const Environment& env, const Point& x, const Point& y) {
  const Box& b = env.box();
  return env.label(b.vertex_index(x)) == env.label(b.vertex_index(y));
}

std::vector<std::int64_t> line_cluster_hits(const Environment& env, const Point& u,
                                            std::int64_t n_max) {
  if (u.is_zero()) throw ConfigError("direction must be nonzero");
  const Box& b = env.box();
  std::vector<std::int64_t> hits;
  if (!env.giant_label()) return hits;
  for (std::int64_t k = 1;; ++k) {
    if (n_max >= 0 && static_cast<std::int64_t>(hits.size()) >= n_max) break;
    const Point x = u * k;
    if (!b.in_inner(x)) break;
    if (env.in_giant(x)) hits.push_back(k);
  }
  return hits;
}

double giant_density(const Environment& env) {
  if (!env.giant_label()) return 0.0;
  const Box& b = env.box();
  const int r = b.inner_half_width();
  std::uint64_t count = 0;
  const std::uint64_t n = b.n_vertices();
  for (std::uint64_t v = 0; v < n; ++v) {
    if (!env.in_giant(static_cast<VertexId>(v))) continue;
    const Point x = b.vertex_at(static_cast<VertexId>(v));
    bool inside = true;
    for (int c : x.coords()) inside = inside && c >= -r && c <= r;
    if (inside) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(b.n_inner_vertices());
}

void write_environment(std::ostream& os, const Environment& env) {
  const EnvConfig& c = env.config();
  os << "fpp-environment " << c.dim() << ' ' << c.box.half_width() << ' '
     << format_double(c.p) << ' ' << c.seed << ' ' << c.box.n_edges() << '\n';
  const std::uint64_t n = c.box.n_edges();
  std::string line;
  for (std::uint64_t e = 0; e < n; ++e) {
    line += env.is_open(static_cast<EdgeId>(e)) ? '1' : '0';
    if (line.size() == 64 || e + 1 == n) {
      os << line << '\n';
      line.clear();
    }
  }
}

Environment read_environment(std::istream& is) {
  std::string magic;
  int dim = 0;
  int half_width = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t n_edges = 0;
  if (!(is >> magic >> dim >> half_width >> p >> seed >> n_edges) ||
      magic != "fpp-environment") {
    throw IoError("not an environment dump");
  }
  EnvConfig cfg{Box(dim, half_width), p, seed};
  if (cfg.box.n_edges() != n_edges) throw IoError("edge count mismatch in dump");
  std::vector<bool> open;
  open.reserve(n_edges);
  char ch = 0;
  while (open.size() < n_edges && is.get(ch)) {
    if (ch == '0' || ch == '1') open.push_back(ch == '1');
  }
  if (open.size() != n_edges) throw IoError("truncated environment dump");
  return Environment::from_open_bits(cfg, open);
}

}  // namespace fpp
