#include "fpp/render.hpp"

#include <algorithm>
#include <sstream>

#include "fpp/error.hpp"
#include "fpp/io.hpp"

namespace fpp {

std::size_t Snapshot::count(PixelClass c) const {
  return static_cast<std::size_t>(std::count(grid.begin(), grid.end(), c));
}

Snapshot make_snapshot(const Environment& env, const WetSet& ws, double t) {
  const Box& box = env.box();
  if (box.dim() != 2) throw UnsupportedDimensionError("snapshots need d = 2");
  if (!(ws.box() == box)) throw ConfigError("wet set and environment boxes differ");
  Snapshot snap;
  snap.half_width = box.half_width();
  snap.side = box.side();
  snap.t = t;
  snap.grid.assign(static_cast<std::size_t>(snap.side) * static_cast<std::size_t>(snap.side),
                   PixelClass::unreached);
  const int L = snap.half_width;
  for (int y = -L; y <= L; ++y) {
    for (int x = -L; x <= L; ++x) {
      const VertexId v = box.vertex_index(Point{x, y});
      PixelClass c = PixelClass::unreached;
      if (Point{x, y} == ws.source()) {
        c = PixelClass::origin;
      } else if (ws.contains(v) && ws.time(v).value() <= t) {
        c = PixelClass::reached;
      } else if (env.in_giant(v)) {
        c = PixelClass::giant_dry;
      }
      const auto row = static_cast<std::size_t>(L - y);
      const auto col = static_cast<std::size_t>(x + L);
      snap.grid[row * static_cast<std::size_t>(snap.side) + col] = c;
    }
  }
  return snap;
}

Overlay polygon_overlay(std::string name, const ConvexPolygon& poly, double s) {
  Overlay o{std::move(name), {}, true};
  for (const Vec2& v : poly.vertices()) o.points.push_back(v * s);
  return o;
}

Overlay segment_overlay(std::string name, Vec2 a, Vec2 b) {
  return Overlay{std::move(name), {a, b}, false};
}

RenderMeta render_meta(const Environment& env, double t) {
  return RenderMeta{env.box().dim(), env.box().half_width(), env.config().p,
                    env.config().seed, t};
}

std::string to_pgm(const Snapshot& snap, const RenderMeta& meta) {
  std::ostringstream os;
  os << "P2\n# d=" << meta.dim << " L=" << meta.half_width << " p=" << format_double(meta.p)
     << " seed=" << meta.seed << " t=" << format_double(meta.t) << "\n"
     << snap.side << ' ' << snap.side << "\n255\n";
  for (int r = 0; r < snap.side; ++r) {
    for (int c = 0; c < snap.side; ++c) {
      if (c) os << ' ';
      os << static_cast<int>(snap.at(r, c));
    }
    os << '\n';
  }
  return os.str();
}

std::string to_svg(const Snapshot& snap) {
  const int L = snap.half_width;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << -L - 0.5 << ' ' << -L - 0.5
     << ' ' << snap.side << ' ' << snap.side << "\" width=\"" << snap.side << "\" height=\""
     << snap.side << "\">\n";
  os << "<rect x=\"" << -L - 0.5 << "\" y=\"" << -L - 0.5 << "\" width=\"" << snap.side
     << "\" height=\"" << snap.side << "\" fill=\"white\" stroke=\"black\"/>\n";
  // reached vertices as one path of unit squares, y flipped to screen space
  os << "<path fill=\"black\" d=\"";
  for (int r = 0; r < snap.side; ++r) {
    for (int c = 0; c < snap.side; ++c) {
      if (snap.at(r, c) != PixelClass::reached) continue;
      os << 'M' << c - L - 0.5 << ' ' << r - L - 0.5 << "h1v1h-1z";
    }
  }
  os << "\"/>\n";
  const char* colors[] = {"red", "blue", "green", "orange"};
  std::size_t k = 0;
  for (const Overlay& o : snap.overlays) {
    const auto clip = [L](double v) { return std::clamp(v, -L - 0.5, L + 0.5); };
    os << "<" << (o.closed ? "polygon" : "polyline") << " id=\"" << o.name
       << "\" fill=\"none\" stroke=\"" << colors[k++ % 4] << "\" points=\"";
    for (std::size_t i = 0; i < o.points.size(); ++i) {
      if (i) os << ' ';
      os << format_double(clip(o.points[i].x)) << ',' << format_double(clip(-o.points[i].y));
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void render_wet_set(const Snapshot& snap, const RenderMeta& meta,
                    const std::filesystem::path& pgm_path,
                    const std::filesystem::path& svg_path) {
  write_text_file(pgm_path, to_pgm(snap, meta));
  if (!svg_path.empty() && !snap.overlays.empty()) write_text_file(svg_path, to_svg(snap));
}

PgmImage parse_pgm(const std::string& text) {
  std::istringstream is(text);
  std::string magic;
  is >> magic;
  if (magic != "P2") throw ValidationError("not a plain PGM file");
  PgmImage img;
  is >> std::ws;
  while (is.peek() == '#') {
    std::string line;
    std::getline(is, line);
    if (img.comment.empty()) img.comment = line;
    is >> std::ws;
  }
  if (!(is >> img.width >> img.height >> img.max_value)) {
    throw ValidationError("truncated PGM header");
  }
  img.pixels.reserve(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  int v = 0;
  while (is >> v) img.pixels.push_back(v);
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height)) {
    throw ValidationError("PGM pixel count does not match its header");
  }
  return img;
}

}  // namespace fpp
