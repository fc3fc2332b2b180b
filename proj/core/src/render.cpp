#include "graphsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include <zlib.h>

#include "graphsim/errors.hpp"

namespace graphsim {

double RenderStyle::node_radius(int node_count) const {
  if (node_count < 1) throw RenderError("node radius undefined for empty graph");
  return std::clamp(200.0 / std::sqrt(static_cast<double>(node_count)), 4.0, 12.0);
}

namespace {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

Rgb parse_color(const std::string& hex) {
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() != 7 || hex[0] != '#')
    throw RenderError("color must be #rrggbb: " + hex);
  int v[6];
  for (int i = 0; i < 6; ++i) {
    v[i] = nibble(hex[static_cast<std::size_t>(i) + 1]);
    if (v[i] < 0) throw RenderError("color must be #rrggbb: " + hex);
  }
  return {static_cast<std::uint8_t>(v[0] * 16 + v[1]),
          static_cast<std::uint8_t>(v[2] * 16 + v[3]),
          static_cast<std::uint8_t>(v[4] * 16 + v[5])};
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void check_inputs(const Graph& g, const Layout& layout, const RenderStyle& style) {
  style.validate();
  if (static_cast<int>(layout.positions.size()) != g.node_count())
    throw RenderError("layout does not match graph: " +
                      std::to_string(layout.positions.size()) + " positions for " +
                      std::to_string(g.node_count()) + " nodes");
  for (const auto& p : layout.positions)
    if (!std::isfinite(p.first) || !std::isfinite(p.second) || p.first < 0.0 ||
        p.first > 1.0 || p.second < 0.0 || p.second > 1.0)
      throw RenderError("layout position outside the unit square");
}

}  // namespace

void RenderStyle::validate() const {
  if (canvas < 64) throw RenderError("canvas must be at least 64 px");
  if (!(margin >= 0.0 && margin < 0.4)) throw RenderError("margin must be in [0, 0.4)");
  if (!(edge_width > 0.0)) throw RenderError("edge width must be positive");
  parse_color(node_fill);
  parse_color(edge_stroke);
  parse_color(background);
}

std::string render_svg(const Graph& g, const Layout& layout, const RenderStyle& style) {
  check_inputs(g, layout, style);
  const double side = static_cast<double>(style.canvas);
  const double inset = style.margin * side;
  const double scale = side - 2.0 * inset;
  auto px = [&](double x) { return inset + x * scale; };

  std::string out;
  out.reserve(64 * (layout.positions.size() + g.edges().size()) + 256);
  const std::string dim = std::to_string(style.canvas);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + dim + "\" height=\"" + dim +
         "\" viewBox=\"0 0 " + dim + " " + dim + "\">\n";
  out += "<rect width=\"" + dim + "\" height=\"" + dim + "\" fill=\"" + style.background +
         "\"/>\n";
  for (const Edge& e : g.edges()) {
    const auto& a = layout.positions[static_cast<std::size_t>(e.first)];
    const auto& b = layout.positions[static_cast<std::size_t>(e.second)];
    out += "<line x1=\"" + fmt2(px(a.first)) + "\" y1=\"" + fmt2(px(a.second)) + "\" x2=\"" +
           fmt2(px(b.first)) + "\" y2=\"" + fmt2(px(b.second)) + "\" stroke=\"" +
           style.edge_stroke + "\" stroke-width=\"" + fmt2(style.edge_width) + "\"/>\n";
  }
  const double r = style.node_radius(g.node_count());
  for (const auto& p : layout.positions) {
    out += "<circle cx=\"" + fmt2(px(p.first)) + "\" cy=\"" + fmt2(px(p.second)) + "\" r=\"" +
           fmt2(r) + "\" fill=\"" + style.node_fill + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

namespace {

class Raster {
 public:
  Raster(int side, Rgb bg) : side_(side), data_(static_cast<std::size_t>(side) * side * 3) {
    for (std::size_t i = 0; i < data_.size(); i += 3) {
      data_[i] = bg.r;
      data_[i + 1] = bg.g;
      data_[i + 2] = bg.b;
    }
  }

  void blend(int x, int y, Rgb c, double cov) {
    if (x < 0 || y < 0 || x >= side_ || y >= side_ || cov <= 0.0) return;
    cov = std::min(cov, 1.0);
    std::size_t i = (static_cast<std::size_t>(y) * side_ + x) * 3;
    data_[i] = static_cast<std::uint8_t>(std::lround(data_[i] * (1.0 - cov) + c.r * cov));
    data_[i + 1] = static_cast<std::uint8_t>(std::lround(data_[i + 1] * (1.0 - cov) + c.g * cov));
    data_[i + 2] = static_cast<std::uint8_t>(std::lround(data_[i + 2] * (1.0 - cov) + c.b * cov));
  }

  // Antialiased segment of the given width: coverage from pixel-center
  // distance to the segment.
  void line(double x1, double y1, double x2, double y2, double width, Rgb c) {
    const double half = width / 2.0;
    const int x_lo = static_cast<int>(std::floor(std::min(x1, x2) - half - 1.0));
    const int x_hi = static_cast<int>(std::ceil(std::max(x1, x2) + half + 1.0));
    const int y_lo = static_cast<int>(std::floor(std::min(y1, y2) - half - 1.0));
    const int y_hi = static_cast<int>(std::ceil(std::max(y1, y2) + half + 1.0));
    const double vx = x2 - x1, vy = y2 - y1;
    const double len2 = vx * vx + vy * vy;
    for (int y = std::max(y_lo, 0); y <= std::min(y_hi, side_ - 1); ++y)
      for (int x = std::max(x_lo, 0); x <= std::min(x_hi, side_ - 1); ++x) {
        const double px = x + 0.5, py = y + 0.5;
        double t = len2 > 0.0 ? ((px - x1) * vx + (py - y1) * vy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double dx = px - (x1 + t * vx), dy = py - (y1 + t * vy);
        const double d = std::sqrt(dx * dx + dy * dy);
        blend(x, y, c, half + 0.5 - d);
      }
  }

  void circle(double cx, double cy, double r, Rgb c) {
    const int x_lo = static_cast<int>(std::floor(cx - r - 1.0));
    const int x_hi = static_cast<int>(std::ceil(cx + r + 1.0));
    const int y_lo = static_cast<int>(std::floor(cy - r - 1.0));
    const int y_hi = static_cast<int>(std::ceil(cy + r + 1.0));
    for (int y = std::max(y_lo, 0); y <= std::min(y_hi, side_ - 1); ++y)
      for (int x = std::max(x_lo, 0); x <= std::min(x_hi, side_ - 1); ++x) {
        const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
        const double d = std::sqrt(dx * dx + dy * dy);
        blend(x, y, c, r + 0.5 - d);
      }
  }

  int side() const { return side_; }
  const std::vector<std::uint8_t>& data() const { return data_; }

 private:
  int side_;
  std::vector<std::uint8_t> data_;
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& payload) {
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  std::uint32_t crc = static_cast<std::uint32_t>(
      ::crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start)));
  put_u32(out, crc);
}

std::vector<std::uint8_t> png_encode(const Raster& raster) {
  const int side = raster.side();
  // raw scanlines, each prefixed with filter byte 0
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(side) * (static_cast<std::size_t>(side) * 3 + 1));
  const auto& data = raster.data();
  for (int y = 0; y < side; ++y) {
    raw.push_back(0);
    const std::uint8_t* row = data.data() + static_cast<std::size_t>(y) * side * 3;
    raw.insert(raw.end(), row, row + static_cast<std::size_t>(side) * 3);
  }

  uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(bound);
  if (::compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                  Z_DEFAULT_COMPRESSION) != Z_OK)
    throw RenderError("deflate of image data failed");
  compressed.resize(bound);

  std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(side));
  put_u32(ihdr, static_cast<std::uint32_t>(side));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // color type: truecolor RGB
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter method
  ihdr.push_back(0);  // no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", compressed);
  put_chunk(out, "IEND", {});
  return out;
}

}  // namespace

std::vector<std::uint8_t> render_png(const Graph& g, const Layout& layout,
                                     const RenderStyle& style) {
  check_inputs(g, layout, style);
  const double side = static_cast<double>(style.canvas);
  const double inset = style.margin * side;
  const double scale = side - 2.0 * inset;
  auto px = [&](double x) { return inset + x * scale; };

  Raster raster(style.canvas, parse_color(style.background));
  const Rgb stroke = parse_color(style.edge_stroke);
  for (const Edge& e : g.edges()) {
    const auto& a = layout.positions[static_cast<std::size_t>(e.first)];
    const auto& b = layout.positions[static_cast<std::size_t>(e.second)];
    raster.line(px(a.first), px(a.second), px(b.first), px(b.second), style.edge_width, stroke);
  }
  const Rgb fill = parse_color(style.node_fill);
  const double r = style.node_radius(g.node_count());
  for (const auto& p : layout.positions) raster.circle(px(p.first), px(p.second), r, fill);

  return png_encode(raster);
}

}  // namespace graphsim
