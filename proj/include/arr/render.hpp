#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "arr/model.hpp"
#include "arr/png.hpp"
#include "arr/rng.hpp"

namespace arr {

using Rgb = std::array<std::uint8_t, 3>;

struct Point {
  int x = 0;
  int y = 0;
};

struct StyleConfig {
  int canvas = 250;
  Rgb background{255, 255, 255};
  std::array<Rgb, 6> palette{{{20, 20, 20}, {128, 128, 128}, {220, 40, 40},
                              {40, 160, 60}, {40, 80, 220}, {235, 200, 30}}};
  std::array<int, 3> radius{16, 24, 34};  // small, medium, large (px)
  /// Slot 0 at the centre, slots 1-5 on a ring (angles -90 + 72k degrees).
  std::array<Point, kMaxSlots> anchors{{{125, 125}, {125, 47}, {199, 101}, {171, 188}, {79, 188}, {51, 101}}};
  int stroke = 3;        // outline width for hollow and hatched fills (px)
  int hatch_period = 8;  // px
  int hatch_width = 3;   // px

  friend bool operator==(const StyleConfig&, const StyleConfig&) = default;
};

namespace detail {

// Sub-pixel resolution: coordinates are in 1/16 px, 4x4 samples per pixel.
inline constexpr int kSub = 16;
inline constexpr int kSamples = 4;

// Unit glyph outlines, radius 1000, y pointing down.
inline constexpr std::array<Point, 4> kSquare{{{-800, -800}, {800, -800}, {800, 800}, {-800, 800}}};
inline constexpr std::array<Point, 3> kTriangle{{{0, -1000}, {866, 500}, {-866, 500}}};
inline constexpr std::array<Point, 4> kDiamond{{{0, -1000}, {700, 0}, {0, 1000}, {-700, 0}}};
inline constexpr std::array<Point, 10> kStar{{{0, -1000}, {235, -324}, {951, -309}, {380, 124},
                                              {588, 809}, {0, 400}, {-588, 809}, {-380, 124},
                                              {-951, -309}, {-235, -324}}};
inline constexpr std::array<Point, 12> kCross{{{-300, -1000}, {300, -1000}, {300, -300},
                                               {1000, -300}, {1000, 300}, {300, 300},
                                               {300, 1000}, {-300, 1000}, {-300, 300},
                                               {-1000, 300}, {-1000, -300}, {-300, -300}}};

inline std::span<const Point> outline(std::uint8_t shape) {
  switch (shape) {
    case 1: return kSquare;
    case 2: return kTriangle;
    case 3: return kDiamond;
    case 4: return kStar;
    case 5: return kCross;
    default: return {};
  }
}

// Rotation by k * 45 degrees with cos 45 = 181/256.
inline Point rotate(Point p, int k) {
  static constexpr std::array<int, 8> kCos{256, 181, 0, -181, -256, -181, 0, 181};
  static constexpr std::array<int, 8> kSin{0, 181, 256, 181, 0, -181, -256, -181};
  const int c = kCos[static_cast<std::size_t>(k & 7)];
  const int s = kSin[static_cast<std::size_t>(k & 7)];
  auto div = [](long v) { return static_cast<int>(v >= 0 ? (v + 128) / 256 : -((-v + 128) / 256)); };
  return {div(static_cast<long>(p.x) * c - static_cast<long>(p.y) * s),
          div(static_cast<long>(p.x) * s + static_cast<long>(p.y) * c)};
}

inline int scale(int v, long num, long den) {
  const long x = static_cast<long>(v) * num;
  return static_cast<int>(x >= 0 ? (x + den / 2) / den : -((-x + den / 2) / den));
}

/// Even-odd point-in-polygon on integer coordinates.
inline bool inside(const std::vector<Point>& poly, long x, long y) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const long xi = poly[i].x, yi = poly[i].y, xj = poly[j].x, yj = poly[j].y;
    if ((yi > y) != (yj > y)) {
      // x < xi + (y - yi) * (xj - xi) / (yj - yi), cross-multiplied
      const long lhs = (x - xi) * (yj - yi);
      const long rhs = (y - yi) * (xj - xi);
      if (yj > yi ? lhs < rhs : lhs > rhs) in = !in;
    }
  }
  return in;
}

struct Glyph {
  bool circle = false;
  std::vector<Point> outer, inner;  // sub-pixel coordinates
  long r_outer = 0, r_inner = 0;    // circle radii, sub-pixel
  Point centre;                     // sub-pixel

  bool in_outer(long x, long y) const {
    if (circle) {
      const long dx = x - centre.x, dy = y - centre.y;
      return dx * dx + dy * dy <= r_outer * r_outer;
    }
    return inside(outer, x, y);
  }
  bool in_inner(long x, long y) const {
    if (circle) {
      const long dx = x - centre.x, dy = y - centre.y;
      return dx * dx + dy * dy <= r_inner * r_inner;
    }
    return inside(inner, x, y);
  }
};

inline Glyph make_glyph(const ObjectSpec& o, const StyleConfig& style) {
  Glyph g;
  const Point a = style.anchors.at(o.slot);
  g.centre = {a.x * kSub + kSub / 2, a.y * kSub + kSub / 2};
  const long r = static_cast<long>(style.radius.at(o.get(Trait::Size))) * kSub;
  const long ri = std::max<long>(0, r - static_cast<long>(style.stroke) * kSub);
  if (o.get(Trait::Shape) == 0) {
    g.circle = true;
    g.r_outer = r;
    g.r_inner = ri;
    return g;
  }
  for (Point p : outline(o.get(Trait::Shape))) {
    const Point q = rotate(p, o.get(Trait::Rotation));
    g.outer.push_back({g.centre.x + scale(q.x, r, 1000), g.centre.y + scale(q.y, r, 1000)});
    g.inner.push_back({g.centre.x + scale(q.x, ri, 1000), g.centre.y + scale(q.y, ri, 1000)});
  }
  return g;
}

inline std::uint8_t blend(std::uint8_t bg, std::uint8_t fg, int covered) {
  constexpr int n = kSamples * kSamples;
  return static_cast<std::uint8_t>((bg * (n - covered) + fg * covered + n / 2) / n);
}

inline void draw_object(Image& img, const ObjectSpec& o, const StyleConfig& style, Point offset) {
  const Glyph g = make_glyph(o, style);
  const Rgb col = style.palette.at(o.get(Trait::Color));
  const int fill = o.get(Trait::Fill);  // 0 solid, 1 hollow, 2 hatched
  const int reach = style.radius.at(o.get(Trait::Size)) + 2;
  const Point a = style.anchors.at(o.slot);
  const long period = static_cast<long>(style.hatch_period) * kSub;
  const long width = static_cast<long>(style.hatch_width) * kSub;
  for (int py = std::max(0, a.y - reach); py <= std::min(style.canvas - 1, a.y + reach); ++py)
    for (int px = std::max(0, a.x - reach); px <= std::min(style.canvas - 1, a.x + reach); ++px) {
      int covered = 0;
      for (int sy = 0; sy < kSamples; ++sy)
        for (int sx = 0; sx < kSamples; ++sx) {
          const long x = px * kSub + sx * (kSub / kSamples) + kSub / kSamples / 2;
          const long y = py * kSub + sy * (kSub / kSamples) + kSub / kSamples / 2;
          if (!g.in_outer(x, y)) continue;
          bool on = true;
          if (fill != 0 && g.in_inner(x, y))
            on = fill == 2 && ((x + y) % period + period) % period < width;
          covered += on ? 1 : 0;
        }
      if (covered == 0) continue;
      auto* p = img.at(px + offset.x, py + offset.y);
      for (int c = 0; c < 3; ++c) p[c] = blend(p[c], col[static_cast<std::size_t>(c)], covered);
    }
}

inline void fill_rect(Image& img, int x0, int y0, int w, int h, Rgb c) {
  for (int y = std::max(0, y0); y < std::min(img.height, y0 + h); ++y)
    for (int x = std::max(0, x0); x < std::min(img.width, x0 + w); ++x) {
      auto* p = img.at(x, y);
      p[0] = c[0];
      p[1] = c[1];
      p[2] = c[2];
    }
}

inline void frame(Image& img, int x0, int y0, int w, int h, int t, Rgb c) {
  fill_rect(img, x0 - t, y0 - t, w + 2 * t, t, c);
  fill_rect(img, x0 - t, y0 + h, w + 2 * t, t, c);
  fill_rect(img, x0 - t, y0, t, h, c);
  fill_rect(img, x0 + w, y0, t, h, c);
}

inline void draw_cell(Image& img, const Cell& cell, const StyleConfig& style, Point offset) {
  fill_rect(img, offset.x, offset.y, style.canvas, style.canvas, style.background);
  for (const auto& o : cell.objects()) draw_object(img, o, style, offset);
}

}  // namespace detail

/// Objects are painted in identity order, so later layers cover earlier ones.
inline Image render_cell(const Cell& cell, const StyleConfig& style = {}) {
  Image img(style.canvas, style.canvas, style.background);
  detail::draw_cell(img, cell, style, {0, 0});
  return img;
}

/// 3x3 query grid with the hole marked, then the candidates four per row.
inline Image render_problem_sheet(const Problem& p, const StyleConfig& style = {}) {
  constexpr int margin = 20, gap = 12, band = 40;
  constexpr Rgb rule_color{90, 90, 90};
  const int c = style.canvas;
  const int per_row = 4;
  const int rows = static_cast<int>((p.candidates.size() + per_row - 1) / per_row);
  const int grid_w = 3 * c + 2 * gap;
  const int strip_w = per_row * c + (per_row - 1) * gap;
  const int width = 2 * margin + std::max(grid_w, strip_w);
  const int height = 2 * margin + grid_w + band + rows * c + std::max(0, rows - 1) * gap;
  Image img(width, height, {235, 235, 235});
  const int gx = (width - grid_w) / 2;
  for (int i = 0; i < 9; ++i) {
    const Point at{gx + (i % 3) * (c + gap), margin + (i / 3) * (c + gap)};
    if (i < 8) {
      detail::draw_cell(img, p.grid[static_cast<std::size_t>(i)], style, at);
    } else {
      detail::fill_rect(img, at.x, at.y, c, c, {200, 200, 200});
      const int m = c / 2 - 12;
      detail::fill_rect(img, at.x + m, at.y + m, 24, 24, rule_color);
    }
    detail::frame(img, at.x, at.y, c, c, 2, rule_color);
  }
  const int sy = margin + grid_w + band;
  detail::fill_rect(img, margin, sy - band / 2 - 2, width - 2 * margin, 4, rule_color);
  const int sx = (width - strip_w) / 2;
  for (std::size_t k = 0; k < p.candidates.size(); ++k) {
    const int i = static_cast<int>(k);
    const Point at{sx + (i % per_row) * (c + gap), sy + (i / per_row) * (c + gap)};
    detail::draw_cell(img, p.candidates[k], style, at);
    detail::frame(img, at.x, at.y, c, c, 2, rule_color);
  }
  return img;
}

/// Color-value jitter: every non-background pixel channel is shifted by a
/// per-image offset drawn from [-amplitude, amplitude]. Amplitude 0 is a no-op.
inline void jitter_colors(Image& img, int amplitude, std::uint64_t seed, const StyleConfig& style = {}) {
  if (amplitude <= 0) return;
  Rng rng(seed);
  std::array<int, 3> shift{};
  for (auto& s : shift) s = rng.between(-amplitude, amplitude);
  for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
    if (img.rgb[i] == style.background[0] && img.rgb[i + 1] == style.background[1] &&
        img.rgb[i + 2] == style.background[2])
      continue;
    for (std::size_t ch = 0; ch < 3; ++ch)
      img.rgb[i + ch] = static_cast<std::uint8_t>(std::clamp(img.rgb[i + ch] + shift[ch], 0, 255));
  }
}

}  // namespace arr
