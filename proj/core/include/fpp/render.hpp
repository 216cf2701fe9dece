#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fpp/environment.hpp"
#include "fpp/geometry.hpp"
#include "fpp/paths.hpp"

namespace fpp {

/// Gray levels of the per-vertex classes.
enum class PixelClass : std::uint8_t {
  reached = 0,
  origin = 100,
  giant_dry = 200,
  unreached = 255,
};

/// A polyline in lattice coordinates.
struct Overlay {
  std::string name;
  std::vector<Vec2> points;
  bool closed = true;
};

/// Per-vertex classes of a d = 2 box: row 0 is the top (largest x_2),
/// column 0 the left (smallest x_1).
struct Snapshot {
  int half_width = 0;
  int side = 0;
  double t = 0.0;
  std::vector<PixelClass> grid;
  std::vector<Overlay> overlays;

  PixelClass at(int row, int col) const {
    return grid[static_cast<std::size_t>(row) * static_cast<std::size_t>(side) +
                static_cast<std::size_t>(col)];
  }
  std::size_t count(PixelClass c) const;
};

/// reached: d(source, x) <= t; origin: the source; giant_dry: in the giant
/// but not reached.
Snapshot make_snapshot(const Environment& env, const WetSet& ws, double t);

/// Overlay polygon scaled by s (lattice coordinates).
Overlay polygon_overlay(std::string name, const ConvexPolygon& poly, double s);
Overlay segment_overlay(std::string name, Vec2 a, Vec2 b);

struct RenderMeta {
  int dim = 2;
  int half_width = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  double t = 0.0;
};

RenderMeta render_meta(const Environment& env, double t);

/// Plain PGM (P2) with one comment line "# d L p seed t".
std::string to_pgm(const Snapshot& snap, const RenderMeta& meta);
/// Standalone SVG of the grid outline and overlays (presentation only).
std::string to_svg(const Snapshot& snap);

/// Writes the PGM and, when the snapshot carries overlays and svg_path is
/// non-empty, the SVG. Throws IoError on failure.
void render_wet_set(const Snapshot& snap, const RenderMeta& meta,
                    const std::filesystem::path& pgm_path,
                    const std::filesystem::path& svg_path = {});

struct PgmImage {
  int width = 0;
  int height = 0;
  int max_value = 0;
  std::string comment;
  std::vector<int> pixels;
};

PgmImage parse_pgm(const std::string& text);

}  // namespace fpp
