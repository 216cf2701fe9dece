#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "fpp/error.hpp"
#include "fpp/flatedge.hpp"
#include "fpp/rng.hpp"

using namespace fpp;

namespace {

// Set-based reference walk of the oriented cluster with the same bond draws.
std::optional<std::vector<int>> reference_right_edge(double q, int generations, std::uint64_t seed) {
  std::set<int> alive{0};
  std::vector<int> right{0};
  for (int n = 0; n < generations; ++n) {
    std::set<int> next;
    for (int x : alive) {
      for (int dir = 0; dir < 2; ++dir) {
        const std::uint64_t c = (static_cast<std::uint64_t>(n) << 32) |
                                (static_cast<std::uint64_t>(x + (1LL << 30)) << 1) |
                                static_cast<std::uint64_t>(dir);
        if (counter_uniform(seed, 0x0a1e, c) < q) next.insert(dir == 0 ? x + 1 : x - 1);
      }
    }
    if (next.empty()) return std::nullopt;
    alive = std::move(next);
    right.push_back(*alive.rbegin());
  }
  return right;
}

// x is reached at time exactly |x|_1 under unit times iff an open path
// moves monotonically from 0 to x.
bool monotone_open_path(const Environment& env, const Point& x) {
  const int sx = x[0] >= 0 ? 1 : -1;
  const int sy = x[1] >= 0 ? 1 : -1;
  const int ax = std::abs(x[0]);
  const int ay = std::abs(x[1]);
  std::vector<std::vector<bool>> ok(ax + 1, std::vector<bool>(ay + 1, false));
  const Box& box = env.box();
  auto open_between = [&](const Point& a, const Point& b) {
    const int axis = a[0] != b[0] ? 0 : 1;
    const Point tail = a[axis] < b[axis] ? a : b;
    return env.is_open(box.edge_index(Edge{tail, axis}));
  };
  ok[0][0] = true;
  for (int i = 0; i <= ax; ++i) {
    for (int j = 0; j <= ay; ++j) {
      const Point here{sx * i, sy * j};
      if (i > 0 && ok[i - 1][j] && open_between(Point{sx * (i - 1), sy * j}, here)) ok[i][j] = true;
      if (j > 0 && ok[i][j - 1] && open_between(Point{sx * i, sy * (j - 1)}, here)) ok[i][j] = true;
    }
  }
  return ok[ax][ay];
}

}  // namespace

TEST(Oriented, right_edge_matches_reference) {
  for (double q : {0.6, 0.65, 0.8}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto a = oriented_right_edge(q, 120, seed);
      const auto b = reference_right_edge(q, 120, seed);
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) EXPECT_EQ(*a, *b);
    }
  }
}

TEST(Oriented, full_probability_is_exact) {
  const OrientedSpeedEstimate s = oriented_speed(1.0, 200, 5);
  ASSERT_TRUE(s.alpha_raw.has_value());
  EXPECT_EQ(*s.alpha_raw, 1.0);
  EXPECT_DOUBLE_EQ(*s.alpha_hat, std::numbers::sqrt2 / 2.0);
  EXPECT_EQ(s.std_error, 0.0);
  const auto [m, n] = flat_edge_endpoints(s);
  EXPECT_EQ(m.x, 1.0);
  EXPECT_EQ(m.y, 0.0);
  EXPECT_EQ(n.x, 0.0);
  EXPECT_EQ(n.y, 1.0);
}

TEST(Oriented, subcritical_dies) {
  const OrientedSpeedEstimate s = oriented_speed(0.55, 1000, 200, {3, 2});
  EXPECT_FALSE(s.supercritical);
  const auto [m, n] = flat_edge_endpoints(s);
  EXPECT_EQ(m.x, 0.5);
  EXPECT_EQ(n.y, 0.5);
}

TEST(Oriented, supercritical_reproducible_across_pools) {
  const OrientedSpeedEstimate a = oriented_speed(0.85, 800, 200, {1, 2});
  const OrientedSpeedEstimate b = oriented_speed(0.85, 800, 200, {2, 2});
  ASSERT_TRUE(a.supercritical && b.supercritical);
  const double se = std::hypot(a.std_error, b.std_error);
  EXPECT_LE(std::abs(*a.alpha_hat - *b.alpha_hat), 3.0 * se);
  EXPECT_GT(*a.alpha_hat, 0.0);
  EXPECT_LT(*a.alpha_hat, std::numbers::sqrt2 / 2.0);
}

TEST(Oriented, monotone_in_q_under_coupling) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto lo = oriented_right_edge(0.7, 300, seed);
    const auto hi = oriented_right_edge(0.8, 300, seed);
    if (!lo) continue;
    ASSERT_TRUE(hi.has_value());
    for (std::size_t n = 0; n < lo->size(); ++n) EXPECT_LE((*lo)[n], (*hi)[n]);
  }
}

TEST(Oriented, endpoints_mirror) {
  const OrientedSpeedEstimate s = oriented_speed(0.75, 400, 100, {7, 1});
  const auto [m, n] = flat_edge_endpoints(s);
  EXPECT_DOUBLE_EQ(m.x + m.y, 1.0);
  EXPECT_DOUBLE_EQ(n.x + n.y, 1.0);
  EXPECT_DOUBLE_EQ(m.x, n.y);
  EXPECT_GE(m.x, n.x);
}

TEST(FlatEdge, bins) {
  EXPECT_EQ(flat_edge_bin(0.0, 20), 0);
  EXPECT_EQ(flat_edge_bin(1.0, 20), 19);
  EXPECT_EQ(flat_edge_bin(0.5, 20), 10);
  EXPECT_EQ(flat_edge_bin(0.049, 20), 0);
}

TEST(FlatEdge, full_lattice_touches_everywhere) {
  const Box box(2, 70);
  const Environment env = Environment::from_open_bits(EnvConfig{box, 1.0, 0},
                                                      std::vector<bool>(box.n_edges(), true));
  const PassageField f = sample_field(PassageModel{Dirac{1.0}}, env);
  const OrientedSpeedEstimate s = oriented_speed(1.0, 100, 2);
  const FlatEdgeReport r = flat_edge_scan(env, f, 50.0, s);
  EXPECT_DOUBLE_EQ(r.contact_fraction(), 1.0);
  EXPECT_EQ(r.predicted_lo_bin, 0);
  EXPECT_EQ(r.predicted_hi_bin, 19);
  EXPECT_EQ(*r.contact_lo_bin, 0);
  EXPECT_EQ(*r.contact_hi_bin, 19);
  EXPECT_TRUE(r.segment_match);
  EXPECT_EQ(r.quadrant_extents.size(), 4u);
  // radius 49 and 50, 4k points each
  EXPECT_EQ(r.boundary_count, 4 * (49 + 50));
}

TEST(FlatEdge, contact_set_matches_monotone_paths) {
  const Box box(2, 40);
  const Environment env = Environment::generate(EnvConfig{box, 0.75, 13});
  const PassageField f = sample_field(PassageModel{Dirac{1.0}}, env);
  const OrientedSpeedEstimate s = oriented_speed(0.75, 200, 50);
  FlatEdgeOptions opt;
  opt.band = 0.3;
  const FlatEdgeReport r = flat_edge_scan(env, f, 30.0, s, opt);
  const std::set<Point> contact(r.contact_set.begin(), r.contact_set.end());
  std::int64_t boundary = 0;
  for (int k = 21; k <= 30; ++k) {
    for (int a = -k; a <= k; ++a) {
      for (int sign : {-1, 1}) {
        const int b = sign * (k - std::abs(a));
        if (b == 0 && sign < 0) continue;
        const Point x{a, b};
        ++boundary;
        EXPECT_EQ(contact.count(x) == 1, monotone_open_path(env, x)) << a << "," << b;
      }
    }
  }
  EXPECT_EQ(r.boundary_count, boundary);
}

TEST(FlatEdge, pooling_adds_counts) {
  const Box box(2, 40);
  const OrientedSpeedEstimate s = oriented_speed(0.8, 200, 50);
  std::vector<FlatEdgeReport> reports;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Environment env = Environment::generate(EnvConfig{box, 0.8, seed});
    reports.push_back(flat_edge_scan(env, sample_field(PassageModel{Dirac{1.0}}, env), 30.0, s));
  }
  const FlatEdgeReport pooled = pool_flat_edge(reports);
  std::size_t contact = 0;
  std::size_t extents = 0;
  for (const auto& r : reports) {
    contact += r.contact_set.size();
    extents += r.quadrant_extents.size();
  }
  EXPECT_EQ(pooled.contact_set.size(), contact);
  EXPECT_EQ(pooled.quadrant_extents.size(), extents);
  EXPECT_EQ(pooled.boundary_count, 3 * reports[0].boundary_count);
}

TEST(FlatEdge, errors) {
  const Box box(2, 20);
  const Environment env = Environment::generate(EnvConfig{box, 0.8, 1});
  const OrientedSpeedEstimate s = oriented_speed(0.8, 50, 10);
  EXPECT_THROW(flat_edge_scan(env, sample_field(PassageModel{Exponential{1.0}, 1}, env), 5.0, s),
               HypothesisViolatedError);
  EXPECT_THROW(flat_edge_scan(env, sample_field(PassageModel{Dirac{1.0}}, env), 19.0, s),
               InsufficientBoxError);
  const Environment env3 = Environment::generate(EnvConfig{Box(3, 5), 0.8, 1});
  EXPECT_THROW(flat_edge_scan(env3, sample_field(PassageModel{Dirac{1.0}}, env3), 2.0, s),
               UnsupportedDimensionError);
  EXPECT_THROW(oriented_speed(0.0, 10, 10), ConfigError);
}
