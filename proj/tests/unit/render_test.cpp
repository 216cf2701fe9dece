#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fpp/error.hpp"
#include "fpp/render.hpp"

using namespace fpp;

TEST(Snapshot, classes_match_wet_set) {
  const Environment env = Environment::generate(EnvConfig{Box(2, 15), 0.7, 3});
  const PassageField f = sample_field(PassageModel{Exponential{1.0}, 2}, env);
  const double t = 6.0;
  const WetSet ws = wet_set(env, f, Point{0, 0}, t);
  const Snapshot snap = make_snapshot(env, ws, t);
  ASSERT_EQ(snap.side, 31);
  std::size_t reached = 0;
  std::size_t giant_dry = 0;
  for (int y = 15; y >= -15; --y) {
    for (int x = -15; x <= 15; ++x) {
      const Point v{x, y};
      const PixelClass c = snap.at(15 - y, x + 15);
      if (v == Point{0, 0}) {
        EXPECT_EQ(c, PixelClass::origin);
      } else if (ws.contains(v) && ws.time(v).value() <= t) {
        EXPECT_EQ(c, PixelClass::reached);
        ++reached;
      } else if (env.in_giant(v)) {
        EXPECT_EQ(c, PixelClass::giant_dry);
        ++giant_dry;
      } else {
        EXPECT_EQ(c, PixelClass::unreached);
      }
    }
  }
  EXPECT_EQ(snap.count(PixelClass::reached), reached);
  EXPECT_EQ(snap.count(PixelClass::giant_dry), giant_dry);
  EXPECT_EQ(snap.count(PixelClass::origin), 1u);
}

TEST(Pgm, round_trip) {
  const Environment env = Environment::generate(EnvConfig{Box(2, 10), 0.65, 4});
  const PassageField f = sample_field(PassageModel{Dirac{1.0}}, env);
  const WetSet ws = wet_set(env, f, Point{0, 0}, 5.0);
  const Snapshot snap = make_snapshot(env, ws, 5.0);
  const std::string text = to_pgm(snap, render_meta(env, 5.0));
  const PgmImage img = parse_pgm(text);
  EXPECT_EQ(img.width, 21);
  EXPECT_EQ(img.height, 21);
  EXPECT_EQ(img.max_value, 255);
  EXPECT_EQ(img.comment, "# d=2 L=10 p=0.65 seed=4 t=5");
  ASSERT_EQ(img.pixels.size(), snap.grid.size());
  for (std::size_t i = 0; i < snap.grid.size(); ++i) {
    EXPECT_EQ(img.pixels[i], static_cast<int>(snap.grid[i]));
  }
  EXPECT_THROW(parse_pgm("P5\n1 1\n255\n0\n"), ValidationError);
}

TEST(Snapshot, isolated_origin) {
  const Box box(2, 3);
  const Environment env =
      Environment::from_open_bits(EnvConfig{box, 0.5, 0}, std::vector<bool>(box.n_edges(), false));
  const PassageField f = sample_field(PassageModel{Dirac{1.0}}, env);
  const Snapshot snap = make_snapshot(env, wet_set(env, f, Point{0, 0}), 10.0);
  EXPECT_EQ(snap.count(PixelClass::origin), 1u);
  EXPECT_EQ(snap.count(PixelClass::reached), 0u);
  EXPECT_EQ(snap.count(PixelClass::unreached), 48u);
}

TEST(Render, writes_files) {
  const Environment env = Environment::generate(EnvConfig{Box(2, 8), 0.7, 1});
  const PassageField f = sample_field(PassageModel{Dirac{1.0}}, env);
  Snapshot snap = make_snapshot(env, wet_set(env, f, Point{0, 0}, 4.0), 4.0);
  snap.overlays.push_back(polygon_overlay("diamond", diamond(1.0), 4.0));
  snap.overlays.push_back(segment_overlay("edge", {1.0, 0.0}, {0.0, 1.0}));
  const auto dir = std::filesystem::temp_directory_path() / "fpp_render_test";
  std::filesystem::create_directories(dir);
  render_wet_set(snap, render_meta(env, 4.0), dir / "a.pgm", dir / "a.svg");
  std::ifstream pgm(dir / "a.pgm");
  std::stringstream ss;
  ss << pgm.rdbuf();
  EXPECT_EQ(parse_pgm(ss.str()).pixels.size(), 17u * 17u);
  std::ifstream svg(dir / "a.svg");
  std::string svg_text((std::istreambuf_iterator<char>(svg)), std::istreambuf_iterator<char>());
  EXPECT_NE(svg_text.find("<svg"), std::string::npos);
  EXPECT_NE(svg_text.find("polygon"), std::string::npos);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(render_wet_set(snap, render_meta(env, 4.0), "/nonexistent/dir/x.pgm"), IoError);
}
