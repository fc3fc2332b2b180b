// The four synthetic graph families (GNM random, BBA preferential-attachment,
// NWS small-world, SBM multi-community) plus the size/density class grid and
// connected-corpus drawing.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "graphsim/graph.hpp"
#include "graphsim/rng.hpp"

namespace graphsim {

struct ClassGrid {
  // label -> node count, strictly increasing; exactly 4 entries.
  std::array<std::pair<std::string, int>, 4> size_classes{{
      {"S1", 25}, {"S2", 50}, {"S3", 100}, {"S4", 250}}};
  // label -> linear density |E|/|V|, strictly increasing; exactly 3 entries.
  std::array<std::pair<std::string, double>, 3> density_classes{{
      {"D1", 1.2}, {"D2", 2.0}, {"D3", 3.5}}};
  // allowed relative deviation of achieved from target density
  double tolerance = 0.20;

  void validate() const;
  int size_of(const std::string& label) const;
  double density_of(const std::string& label) const;
};

// Family-specific knobs; only the fields for `generator` are meaningful.
struct GeneratorParams {
  Generator generator = Generator::GNM;
  int target_n = 0;
  double target_linear_density = 0.0;

  long long gnm_m = 0;                       // GNM: exact edge count
  int bba_attach_m = 0;                      // BBA: edges per new node
  int nws_ring_k = 0;                        // NWS: even ring degree
  double nws_shortcut_p = 0.0;               // NWS: per-lattice-edge shortcut prob
  std::vector<int> sbm_block_sizes;          // SBM: sums to target_n
  double sbm_p_in = 0.0;
  double sbm_p_out = 0.0;

  void validate() const;  // throws ParamError
};

// Exact-count uniform random graph: n nodes, m edges.
Graph gen_gnm(int n, long long m, std::uint64_t seed);

// Preferential attachment from a path core of attach_m nodes; each new node
// attaches to attach_m distinct existing nodes with probability proportional
// to degree. Always connected; |E| = attach_m*(n-attach_m) + attach_m - 1.
Graph gen_bba(int n, int attach_m, std::uint64_t seed);

// Newman-Watts: ring lattice (each node to ring_k nearest neighbors) plus,
// per lattice edge with probability shortcut_p, one random shortcut. Ring
// edges are never removed, so the result is always connected.
Graph gen_nws(int n, int ring_k, double shortcut_p, std::uint64_t seed);

// Stochastic block model; may be disconnected (connectivity is enforced one
// level up).
Graph gen_sbm(const std::vector<int>& block_sizes, double p_in, double p_out,
              std::uint64_t seed);

Graph draw(const GeneratorParams& params, std::uint64_t seed);

// Map (family, size class, density class) onto family knobs whose expected
// linear density matches the class target. Throws ParamError when the family
// cannot reach the target within grid.tolerance.
GeneratorParams params_for_target(Generator generator, const std::string& size_class,
                                  const std::string& density_class, const ClassGrid& grid);

struct GraphSpec {
  std::string id;
  std::string size_class;
  std::string density_class;
  GeneratorParams params;
  std::uint64_t seed = 0;
};

enum class ConnectivityPolicy {
  resample_only,         // redraw with incremented sub-seeds until connected
  resample_then_repair,  // after repair_after failed draws, rewire the draw
                         // (preserving n and |E|) into one component
};

struct GenerateOptions {
  int max_attempts = 100;
  ConnectivityPolicy policy = ConnectivityPolicy::resample_only;
  // with resample_then_repair: number of pure resampling attempts before
  // repair kicks in
  int repair_after = 25;
  // additionally reject draws whose |E|/|V| falls outside grid.tolerance of
  // the class target (used at corpus build time)
  bool enforce_density = false;
};

struct GeneratedGraph {
  Graph graph;
  int attempts = 0;
  bool repaired = false;
  double achieved_density = 0.0;
};

// Draw until the acceptance predicate holds; deterministic for a fixed spec.
// Throws GenerationError naming the spec when max_attempts is exhausted.
GeneratedGraph generate_connected(const GraphSpec& spec, const ClassGrid& grid,
                                  const GenerateOptions& opts = {});

// Rewire a disconnected graph into one component without changing n or |E|:
// repeatedly remove a non-bridge edge and add an edge between two components.
// Requires |E| >= n-1 and enough cycle edges; returns false when impossible.
bool repair_connect(Graph& g, Rng& rng);

}  // namespace graphsim
