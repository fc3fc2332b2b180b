// Immutable simple undirected unweighted graph plus canonical JSON file I/O.
//
// Nodes are dense 0-based indices; edges are stored canonically as (u,v) with
// u < v, lexicographically sorted, so a given structure always serializes to
// the same bytes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphsim/errors.hpp"

namespace graphsim {

using Edge = std::pair<int, int>;

class Graph {
 public:
  // Validates and canonicalizes. Throws GraphError on out-of-range endpoint,
  // self-loop, or duplicate edge (after orientation normalization).
  Graph(int node_count, std::vector<Edge> edges, std::string id = "");

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& id() const { return id_; }

  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  bool has_edge(int u, int v) const;

  // |E|/|V|
  double linear_density() const {
    return static_cast<double>(edges_.size()) / node_count_;
  }

  Graph with_id(std::string id) const {
    Graph g = *this;
    g.id_ = std::move(id);
    return g;
  }

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;           // sorted, u < v
  std::vector<std::vector<int>> adj_; // sorted neighbor lists
  std::string id_;
};

std::vector<int> degree_sequence(const Graph& g);

// BFS from node 0 reaches all nodes; the one-node graph counts as connected.
bool is_connected(const Graph& g);

// Relabel nodes: node v in the input becomes perm[v] in the output.
Graph permuted(const Graph& g, const std::vector<int>& perm);

// Stable hash of the canonical edge list (and node count). Identical bytes
// for identical structures *as labeled*; see canonical.hpp for the
// label-independent variant.
std::uint64_t edge_list_hash(const Graph& g);

enum class Generator { GNM, BBA, NWS, SBM };
std::string to_string(Generator g);
Generator generator_from_string(const std::string& s);

// Metadata carried by a graph file alongside the structure itself.
struct GraphFileMeta {
  std::string id;
  Generator generator = Generator::GNM;
  std::string size_class;     // "S1".."S4"
  std::string density_class;  // "D1".."D3"
  std::uint64_t seed = 0;
};

// Canonical JSON text for the graph file; byte-stable for a given
// (graph, meta).
std::string graph_file_text(const Graph& g, const GraphFileMeta& meta);

void save_graph(const Graph& g, const GraphFileMeta& meta, const std::filesystem::path& path);

struct LoadedGraph {
  Graph graph;
  GraphFileMeta meta;
};

// Parses and re-validates all Graph invariants.
LoadedGraph load_graph(const std::filesystem::path& path);
LoadedGraph parse_graph_file(const std::string& text, const std::string& origin = "<memory>");

}  // namespace graphsim
