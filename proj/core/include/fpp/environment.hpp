#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

inline constexpr std::uint64_t kDefaultMaxVertices = std::uint64_t{1} << 27;

/// RNG stream reserved for edge open/closed draws.
inline constexpr std::uint64_t kOpenStream = 0x0e0e;

struct EnvConfig {
  Box box;
  double p = 0.7;
  std::uint64_t seed = 0;

  int dim() const { return box.dim(); }
  void validate() const;
  bool operator==(const EnvConfig&) const = default;
};

/// Uniform driving edge e; the edge is open iff this is < p. Shared across p
/// for a fixed seed, which gives the monotone coupling in p.
double edge_uniform(std::uint64_t seed, EdgeId e);

/// Bernoulli bond configuration on a box plus its cluster labels.
///
/// Cluster labels are the smallest vertex id of each cluster. The giant is
/// the largest cluster having at least one open edge; ties go to the
/// smallest label. With no open edge at all there is no giant.
class Environment {
 public:
  static Environment generate(const EnvConfig& cfg,
                              std::uint64_t max_vertices = kDefaultMaxVertices);

  /// Wraps an explicitly constructed configuration (couplings build these).
  static Environment from_open_bits(const EnvConfig& cfg,
                                    const std::vector<bool>& open);

  const EnvConfig& config() const { return cfg_; }
  const Box& box() const { return cfg_.box; }

  bool is_open(EdgeId e) const { return (open_[e >> 6] >> (e & 63)) & 1U; }
  std::uint64_t n_open() const { return n_open_; }

  VertexId label(VertexId v) const { return labels_[v]; }
  std::span<const VertexId> labels() const { return labels_; }

  std::optional<VertexId> giant_label() const { return giant_; }
  std::uint64_t giant_size() const { return giant_size_; }
  bool in_giant(VertexId v) const { return giant_ && labels_[v] == *giant_; }
  bool in_giant(const Point& p) const { return in_giant(box().vertex_index(p)); }

  std::span<const std::uint64_t> open_words() const { return open_; }

  bool operator==(const Environment&) const = default;

 private:
  Environment() = default;
  void label_clusters();

  EnvConfig cfg_;
  std::vector<std::uint64_t> open_;
  std::uint64_t n_open_ = 0;
  std::vector<VertexId> labels_;
  std::optional<VertexId> giant_;
  std::uint64_t giant_size_ = 0;
};

bool same_cluster(const Environment& env, const Point& x, const Point& y);

/// Increasing multiples k >= 1 with k*u in the giant, scanning while k*u
/// stays in the inner box; at most n_max values (n_max < 0: unlimited).
std::vector<std::int64_t> line_cluster_hits(const Environment& env,
                                            const Point& u,
                                            std::int64_t n_max = -1);

/// Fraction of inner-box vertices that belong to the giant.
double giant_density(const Environment& env);

/// Text dump: header line "fpp-environment d L p seed n_edges", then the open
/// bits in edge_index order as '0'/'1' characters, 64 per line.
void write_environment(std::ostream& os, const Environment& env);
Environment read_environment(std::istream& is);

}  // namespace fpp
