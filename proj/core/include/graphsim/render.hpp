// Deterministic node-link rendering: SVG text and PNG rasterization of the
// same scene (straight edges under uniform node circles, no labels).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphsim/graph.hpp"
#include "graphsim/layout.hpp"

namespace graphsim {

struct RenderStyle {
  int canvas = 1024;                  // square canvas edge in px
  double margin = 0.08;               // canvas fraction kept clear on each side
  std::string node_fill = "#2b6cb0";
  std::string edge_stroke = "#888888";
  double edge_width = 1.5;            // px
  std::string background = "#ffffff";

  // r = 200/sqrt(n), clamped to [4,12] px, so nodes stay legible across sizes
  double node_radius(int node_count) const;
  // canvas >= 64, margin in [0, 0.4), colors #rrggbb, positive edge width
  void validate() const;
};

// Byte-deterministic SVG: one background rect, |E| line elements, |V| circle
// elements. Throws RenderError on style/layout problems.
std::string render_svg(const Graph& g, const Layout& layout, const RenderStyle& style = {});

// PNG (8-bit RGB) rasterization of the same scene, antialiased.
std::vector<std::uint8_t> render_png(const Graph& g, const Layout& layout,
                                     const RenderStyle& style = {});

}  // namespace graphsim
