// Structural feature extraction: degree histogram, local clustering,
// betweenness centrality, and community structure. Everything is computed on
// the canonical form of the graph so results are invariant under relabeling.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graphsim/graph.hpp"

namespace graphsim {

// Node -> community label; labels are dense 0..community_count-1.
struct Partition {
  std::vector<int> community;
  int community_count = 0;
};

// Per-node local clustering coefficient; 0 for degree < 2.
std::vector<double> local_clustering(const Graph& g);

// Betweenness centrality, accumulated over ordered source-target pairs
// (each unordered pair contributes from both directions).
std::vector<double> betweenness_raw(const Graph& g);

// betweenness_raw scaled by 1/((n-1)(n-2)); all zeros for n <= 2.
std::vector<double> betweenness(const Graph& g);

// Two-phase greedy modularity optimization. Node visit order is shuffled from
// `seed` once per level; candidate communities are scanned in ascending id
// with strictly-greater gain required, so ties go to the lowest id. Levels
// continue while modularity improves by more than 1e-7.
Partition louvain(const Graph& g, std::uint64_t seed);

// Q = sum over communities of [e_c/|E| - (deg_c/(2|E|))^2]. Zero-edge graphs
// score 0. Throws MeasureError on a malformed partition.
double modularity(const Graph& g, const Partition& p);

// Community sizes divided by node count, sorted descending.
std::vector<double> relative_community_sizes(const Partition& p, int node_count);

struct FeatureProfile {
  std::string id;
  int node_count = 0;
  int edge_count = 0;
  std::vector<double> degree_dist;         // P(degree = k), k = 0..max degree
  std::vector<double> clustering_values;   // per node, original labels
  std::vector<double> betweenness_values;  // per node, normalized, original labels
  std::vector<double> community_sizes;     // relative, sorted descending
  double modularity = 0.0;
  std::uint64_t structure_hash = 0;        // label-independent
};

// Canonicalizes, computes all features on the canonical form (community
// detection seeded by the structure hash), and maps per-node values back to
// the input labeling.
FeatureProfile compute_features(const Graph& g);

// Canonical JSON round-trip for feature sidecar files; byte-stable.
std::string profile_to_json(const FeatureProfile& p);
FeatureProfile profile_from_json(const std::string& text, const std::string& origin = "<memory>");
void save_profile(const FeatureProfile& p, const std::filesystem::path& path);
FeatureProfile load_profile(const std::filesystem::path& path);

}  // namespace graphsim
