#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fpp/error.hpp"
#include "fpp/geometry.hpp"

using namespace fpp;

TEST(Hull, square_with_interior_points) {
  const Vec2 pts[] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}, {0.2, 0.7}};
  const ConvexPolygon h = ConvexPolygon::hull(pts);
  EXPECT_EQ(h.vertices().size(), 4u);
  EXPECT_DOUBLE_EQ(h.area(), 1.0);
  EXPECT_TRUE(h.is_convex());
  EXPECT_TRUE(h.contains({0.5, 0.5}));
  EXPECT_FALSE(h.contains({1.5, 0.5}));
}

TEST(Hull, degenerate_inputs) {
  const Vec2 line[] = {{0, 0}, {1, 1}, {2, 2}};
  EXPECT_TRUE(ConvexPolygon::hull(line).empty());
  EXPECT_TRUE(ConvexPolygon::hull(std::span<const Vec2>{}).empty());
}

TEST(Diamond, support_and_gauge) {
  const ConvexPolygon d = diamond(2.0);
  EXPECT_DOUBLE_EQ(d.area(), 8.0);
  EXPECT_DOUBLE_EQ(d.support({1, 0}), 2.0);
  EXPECT_DOUBLE_EQ(d.support({1, 1}), 2.0);
  EXPECT_DOUBLE_EQ(d.gauge({1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(d.gauge({-3, 0}), 1.5);
  EXPECT_NEAR(d.asymmetry(), 0.0, 1e-15);
}

TEST(Gauge, requires_origin_inside) {
  const Vec2 pts[] = {{1, 1}, {2, 1}, {2, 2}, {1, 2}};
  EXPECT_THROW(ConvexPolygon::hull(pts).gauge({1, 0}), ValidationError);
}

TEST(Hausdorff, scaled_bodies) {
  const ConvexPolygon a = diamond(1.0);
  EXPECT_DOUBLE_EQ(gauge_hausdorff(a, a, a, 360), 0.0);
  EXPECT_NEAR(gauge_hausdorff(a.scaled(1.3), a, a, 360), 0.3, 1e-12);
  EXPECT_NEAR(gauge_hausdorff(diamond(2.0), a, a, 1440), 1.0, 1e-12);
}

TEST(Hausdorff, square_against_diamond_in_euclidean_gauge) {
  const Vec2 sq[] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
  const ConvexPolygon square = ConvexPolygon::hull(sq);
  // a regular 4096-gon stands in for the Euclidean disc
  std::vector<Vec2> disc;
  for (int k = 0; k < 4096; ++k) {
    const double th = 2 * std::numbers::pi * k / 4096;
    disc.push_back({std::cos(th), std::sin(th)});
  }
  const ConvexPolygon unit = ConvexPolygon::hull(disc);
  const double d = gauge_hausdorff(square, diamond(1.0), unit, 1440);
  // farthest point of the square from the diamond: (1,1) at distance 1/sqrt2
  EXPECT_NEAR(d, std::sqrt(2.0) - 1.0 / std::sqrt(2.0), 1e-6);
}

TEST(Asymmetry, detects_off_centre) {
  const Vec2 tri[] = {{1, 0}, {-1, 1}, {-1, -1}};
  EXPECT_GT(ConvexPolygon::hull(tri).asymmetry(), 0.1);
}
