#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fpp/environment.hpp"
#include "fpp/error.hpp"
#include "oracles/oracles.hpp"

using namespace fpp;

namespace {

Environment make(int d, int L, double p, std::uint64_t seed) {
  return Environment::generate(EnvConfig{Box(d, L), p, seed});
}

}  // namespace

TEST(Environment, deterministic_in_seed) {
  EXPECT_EQ(make(2, 20, 0.6, 5), make(2, 20, 0.6, 5));
  EXPECT_NE(make(2, 20, 0.6, 5), make(2, 20, 0.6, 6));
}

TEST(Environment, extreme_p) {
  const Environment full = make(2, 5, 1.0, 1);
  EXPECT_EQ(full.n_open(), full.box().n_edges());
  EXPECT_EQ(full.giant_size(), full.box().n_vertices());
  EXPECT_DOUBLE_EQ(giant_density(full), 1.0);

  const Environment none = Environment::from_open_bits(
      EnvConfig{Box(2, 3), 0.5, 0}, std::vector<bool>(Box(2, 3).n_edges(), false));
  EXPECT_FALSE(none.giant_label().has_value());
  EXPECT_EQ(none.giant_size(), 0u);
  EXPECT_DOUBLE_EQ(giant_density(none), 0.0);
  EXPECT_FALSE(none.in_giant(Point{0, 0}));
}

TEST(Environment, invalid_config) {
  EXPECT_THROW(make(2, 5, 0.0, 1), ConfigError);
  EXPECT_THROW(make(2, 5, 1.5, 1), ConfigError);
  EXPECT_THROW(Environment::generate(EnvConfig{Box(3, 300), 0.5, 1}, 1000), CapacityError);
  EXPECT_THROW(Environment::from_open_bits(EnvConfig{Box(2, 1), 0.5, 0}, std::vector<bool>(3)),
               ConfigError);
}

TEST(Environment, monotone_coupling_in_p) {
  const Environment lo = make(2, 15, 0.5, 9);
  const Environment hi = make(2, 15, 0.7, 9);
  for (EdgeId e = 0; e < lo.box().n_edges(); ++e) {
    if (lo.is_open(e)) EXPECT_TRUE(hi.is_open(e));
  }
}

TEST(Environment, open_frequency_matches_p) {
  const Environment env = make(2, 200, 0.63, 4);
  const double n = static_cast<double>(env.box().n_edges());
  const double freq = static_cast<double>(env.n_open()) / n;
  EXPECT_NEAR(freq, 0.63, 4.0 * std::sqrt(0.63 * 0.37 / n));
}

TEST(Environment, labels_match_flood_fill) {
  for (int d = 2; d <= 3; ++d) {
    for (double p : {0.3, 0.5, 0.7}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Environment env = make(d, d == 2 ? 12 : 4, p, seed);
        const auto adj = oracle::open_graph(env);
        const auto labels = oracle::flood_fill_labels(adj);
        for (VertexId v = 0; v < env.box().n_vertices(); ++v) {
          ASSERT_EQ(env.label(v), labels[v]);
        }
        const std::int64_t g = oracle::giant_label(adj, labels);
        if (g < 0) {
          EXPECT_FALSE(env.giant_label().has_value());
        } else {
          ASSERT_TRUE(env.giant_label().has_value());
          EXPECT_EQ(*env.giant_label(), static_cast<VertexId>(g));
          EXPECT_EQ(env.giant_size(),
                    static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), g)));
        }
      }
    }
  }
}

TEST(Environment, single_open_edge_is_the_giant) {
  const Box box(2, 2);
  std::vector<bool> open(box.n_edges(), false);
  const EdgeId e = box.edge_index(Edge{Point{1, 1}, 1});
  open[e] = true;
  const Environment env = Environment::from_open_bits(EnvConfig{box, 0.5, 0}, open);
  EXPECT_EQ(env.giant_size(), 2u);
  EXPECT_TRUE(env.in_giant(Point{1, 1}));
  EXPECT_TRUE(env.in_giant(Point{1, 2}));
  EXPECT_FALSE(env.in_giant(Point{0, 0}));
  EXPECT_TRUE(same_cluster(env, Point{1, 1}, Point{1, 2}));
  EXPECT_FALSE(same_cluster(env, Point{0, 0}, Point{1, 2}));
}

TEST(Environment, tie_goes_to_smaller_label) {
  const Box box(2, 2);
  std::vector<bool> open(box.n_edges(), false);
  open[box.edge_index(Edge{Point{1, 1}, 1})] = true;
  open[box.edge_index(Edge{Point{-2, -2}, 0})] = true;
  const Environment env = Environment::from_open_bits(EnvConfig{box, 0.5, 0}, open);
  EXPECT_EQ(*env.giant_label(), box.vertex_index(Point{-2, -2}));
}

TEST(Environment, line_hits) {
  const Environment full = make(2, 10, 1.0, 0);
  const auto hits = line_cluster_hits(full, Point{1, 0});
  ASSERT_EQ(hits.size(), 8u);
  EXPECT_EQ(hits.front(), 1);
  EXPECT_EQ(hits.back(), 8);
  EXPECT_EQ(line_cluster_hits(full, Point{1, 1}, 3).size(), 3u);

  const Environment env = make(2, 30, 0.6, 2);
  for (std::int64_t k : line_cluster_hits(env, Point{2, 1})) {
    EXPECT_TRUE(env.in_giant(Point{2, 1} * k));
    EXPECT_TRUE(env.box().in_inner(Point{2, 1} * k));
  }
}

TEST(Environment, dump_round_trip) {
  const Environment env = make(2, 7, 0.55, 11);
  std::stringstream ss;
  write_environment(ss, env);
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("fpp-environment 2 7 0.55 11 ", 0), 0u);
  const Environment back = read_environment(ss);
  EXPECT_EQ(back, env);

  std::stringstream bad("fpp-environment 2 7 0.55 11 9\n0101\n");
  EXPECT_THROW(read_environment(bad), IoError);
}
