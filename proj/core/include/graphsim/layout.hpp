// Force-directed (Fruchterman-Reingold) node placement in the unit square.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "graphsim/graph.hpp"

namespace graphsim {

struct Layout {
  std::vector<std::pair<double, double>> positions;  // one per node, in [0,1]^2
  // Total FR potential (attractive + repulsive) after the first and the last
  // iteration; a coarse convergence signal (final <= first when the layout
  // settled).
  double energy_first = 0.0;
  double energy_final = 0.0;
};

// Ideal edge length k = sqrt(1/|V|); repulsive force k^2/d between all node
// pairs, attractive d^2/k along edges; per-iteration displacement capped by a
// linearly cooling temperature starting at 0.1. Positions are seeded randomly
// in the unit square and finally rescaled (uniformly, centered) back into it.
// Deterministic per (g, iterations, seed). A single node sits at (0.5, 0.5).
Layout fr_layout(const Graph& g, int iterations = 500, std::uint64_t seed = 0);

}  // namespace graphsim
