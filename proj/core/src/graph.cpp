#include "graphsim/graph.hpp"

#include <algorithm>
#include <queue>

#include <json.hpp>

#include "graphsim/util.hpp"

namespace graphsim {

Graph::Graph(int node_count, std::vector<Edge> edges, std::string id)
    : node_count_(node_count), id_(std::move(id)) {
  if (node_count < 1) {
    throw GraphError(GraphErrorKind::bad_node_count,
                     "node_count must be >= 1, got " + std::to_string(node_count));
  }
  for (auto& e : edges) {
    if (e.first == e.second) {
      throw GraphError(GraphErrorKind::self_loop,
                       "self-loop at node " + std::to_string(e.first));
    }
    if (e.first < 0 || e.second < 0 || e.first >= node_count || e.second >= node_count) {
      throw GraphError(GraphErrorKind::endpoint_out_of_range,
                       "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                           ") endpoint out of range for n=" + std::to_string(node_count));
    }
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    throw GraphError(GraphErrorKind::duplicate_edge,
                     "duplicate edge (" + std::to_string(dup->first) + "," +
                         std::to_string(dup->second) + ")");
  }
  edges_ = std::move(edges);
  adj_.assign(static_cast<std::size_t>(node_count), {});
  for (const auto& [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_ || u == v) return false;
  const auto& nbrs = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  int target = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::binary_search(nbrs.begin(), nbrs.end(), target);
}

std::vector<int> degree_sequence(const Graph& g) {
  std::vector<int> deg(static_cast<std::size_t>(g.node_count()));
  for (int v = 0; v < g.node_count(); ++v) deg[v] = g.degree(v);
  return deg;
}

bool is_connected(const Graph& g) {
  int n = g.node_count();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.neighbors(u)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == n;
}

Graph permuted(const Graph& g, const std::vector<int>& perm) {
  std::vector<Edge> edges;
  edges.reserve(g.edges().size());
  for (const auto& [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return Graph(g.node_count(), std::move(edges), g.id());
}

std::uint64_t edge_list_hash(const Graph& g) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 + g.edges().size() * 8);
  auto push32 = [&bytes](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  push32(static_cast<std::uint32_t>(g.node_count()));
  push32(static_cast<std::uint32_t>(g.edge_count()));
  for (const auto& [u, v] : g.edges()) {
    push32(static_cast<std::uint32_t>(u));
    push32(static_cast<std::uint32_t>(v));
  }
  return fnv1a64(bytes.data(), bytes.size());
}

std::string to_string(Generator g) {
  switch (g) {
    case Generator::GNM: return "GNM";
    case Generator::BBA: return "BBA";
    case Generator::NWS: return "NWS";
    case Generator::SBM: return "SBM";
  }
  return "GNM";
}

Generator generator_from_string(const std::string& s) {
  if (s == "GNM") return Generator::GNM;
  if (s == "BBA") return Generator::BBA;
  if (s == "NWS") return Generator::NWS;
  if (s == "SBM") return Generator::SBM;
  throw GraphError(GraphErrorKind::parse, "unknown generator '" + s + "'");
}

std::string graph_file_text(const Graph& g, const GraphFileMeta& meta) {
  nlohmann::json j;
  j["id"] = meta.id;
  j["generator"] = to_string(meta.generator);
  j["size_class"] = meta.size_class;
  j["density_class"] = meta.density_class;
  j["seed"] = meta.seed;
  j["n"] = g.node_count();
  auto edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  return j.dump() + "\n";
}

void save_graph(const Graph& g, const GraphFileMeta& meta, const std::filesystem::path& path) {
  write_file_atomic(path, graph_file_text(g, meta));
}

LoadedGraph parse_graph_file(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(GraphErrorKind::parse, origin + ": " + e.what());
  }
  try {
    GraphFileMeta meta;
    meta.id = j.at("id").get<std::string>();
    meta.generator = generator_from_string(j.at("generator").get<std::string>());
    meta.size_class = j.at("size_class").get<std::string>();
    meta.density_class = j.at("density_class").get<std::string>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw GraphError(GraphErrorKind::parse, origin + ": malformed edge entry");
      }
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return LoadedGraph{Graph(n, std::move(edges), meta.id), meta};
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(GraphErrorKind::parse, origin + ": " + e.what());
  }
}

LoadedGraph load_graph(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw GraphError(GraphErrorKind::io, e.what());
  }
  return parse_graph_file(text, path.string());
}

}  // namespace graphsim
