#include "graphsim/features.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "graphsim/canonical.hpp"
#include "graphsim/errors.hpp"
#include "graphsim/rng.hpp"
#include "graphsim/util.hpp"

namespace graphsim {

std::vector<double> local_clustering(const Graph& g) {
  const int n = g.node_count();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    const auto& nv = g.neighbors(v);
    const std::size_t d = nv.size();
    if (d < 2) continue;
    // sum over neighbors u of |N(v) ∩ N(u)| counts each triangle at v twice
    long long paired = 0;
    for (int u : nv) {
      const auto& nu = g.neighbors(u);
      std::size_t i = 0, j = 0;
      while (i < nv.size() && j < nu.size()) {
        if (nv[i] < nu[j]) {
          ++i;
        } else if (nv[i] > nu[j]) {
          ++j;
        } else {
          ++paired;
          ++i;
          ++j;
        }
      }
    }
    const double triangles = static_cast<double>(paired) / 2.0;
    out[static_cast<std::size_t>(v)] =
        2.0 * triangles / (static_cast<double>(d) * static_cast<double>(d - 1));
  }
  return out;
}

std::vector<double> betweenness_raw(const Graph& g) {
  const int n = g.node_count();
  std::vector<double> bc(static_cast<std::size_t>(n), 0.0);

  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<double> delta(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
  std::vector<int> order;  // nodes in nondecreasing distance from s
  std::vector<int> queue;
  order.reserve(static_cast<std::size_t>(n));
  queue.reserve(static_cast<std::size_t>(n));

  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();
    queue.clear();

    dist[static_cast<std::size_t>(s)] = 0;
    sigma[static_cast<std::size_t>(s)] = 1.0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      order.push_back(v);
      for (int w : g.neighbors(v)) {
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(w);
        }
        if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(v)] + 1) {
          sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
          preds[static_cast<std::size_t>(w)].push_back(v);
        }
      }
    }

    for (std::size_t i = order.size(); i-- > 0;) {
      int w = order[i];
      for (int v : preds[static_cast<std::size_t>(w)]) {
        delta[static_cast<std::size_t>(v)] +=
            sigma[static_cast<std::size_t>(v)] / sigma[static_cast<std::size_t>(w)] *
            (1.0 + delta[static_cast<std::size_t>(w)]);
      }
      if (w != s) bc[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
    }
  }
  return bc;
}

std::vector<double> betweenness(const Graph& g) {
  const int n = g.node_count();
  if (n <= 2) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
  std::vector<double> bc = betweenness_raw(g);
  const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  for (double& v : bc) v *= scale;
  return bc;
}

namespace {

// Aggregated weighted graph used between community-detection levels.
struct LevelGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // sorted, no self entries
  std::vector<double> self_w;    // edge weight internal to the super-node
  std::vector<double> strength;  // 2*self_w + incident weight
  double total_w = 0.0;          // invariant across levels
};

LevelGraph level_from_graph(const Graph& g) {
  LevelGraph lg;
  lg.n = g.node_count();
  lg.adj.assign(static_cast<std::size_t>(lg.n), {});
  lg.self_w.assign(static_cast<std::size_t>(lg.n), 0.0);
  for (const Edge& e : g.edges()) {
    lg.adj[static_cast<std::size_t>(e.first)].emplace_back(e.second, 1.0);
    lg.adj[static_cast<std::size_t>(e.second)].emplace_back(e.first, 1.0);
  }
  for (auto& nb : lg.adj) std::sort(nb.begin(), nb.end());
  lg.total_w = static_cast<double>(g.edge_count());
  lg.strength.assign(static_cast<std::size_t>(lg.n), 0.0);
  for (int v = 0; v < lg.n; ++v) {
    double s = 2.0 * lg.self_w[static_cast<std::size_t>(v)];
    for (const auto& [u, w] : lg.adj[static_cast<std::size_t>(v)]) s += w;
    lg.strength[static_cast<std::size_t>(v)] = s;
  }
  return lg;
}

// Renumber community labels to 0..k-1 in ascending old-label order.
int renumber_dense(std::vector<int>& com) {
  std::vector<int> values = com;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (int& c : com)
    c = static_cast<int>(std::lower_bound(values.begin(), values.end(), c) - values.begin());
  return static_cast<int>(values.size());
}

double level_modularity(const LevelGraph& lg, const std::vector<int>& com, int k) {
  const double m = lg.total_w;
  if (m <= 0.0) return 0.0;
  std::vector<double> e_c(static_cast<std::size_t>(k), 0.0);
  std::vector<double> d_c(static_cast<std::size_t>(k), 0.0);
  for (int v = 0; v < lg.n; ++v) {
    int c = com[static_cast<std::size_t>(v)];
    e_c[static_cast<std::size_t>(c)] += lg.self_w[static_cast<std::size_t>(v)];
    d_c[static_cast<std::size_t>(c)] += lg.strength[static_cast<std::size_t>(v)];
    for (const auto& [u, w] : lg.adj[static_cast<std::size_t>(v)])
      if (u > v && com[static_cast<std::size_t>(u)] == c) e_c[static_cast<std::size_t>(c)] += w;
  }
  double q = 0.0;
  for (int c = 0; c < k; ++c) {
    double dc = d_c[static_cast<std::size_t>(c)] / (2.0 * m);
    q += e_c[static_cast<std::size_t>(c)] / m - dc * dc;
  }
  return q;
}

// One optimization phase: greedy node moves until a full pass makes none.
std::vector<int> one_level(const LevelGraph& lg, const std::vector<int>& order) {
  const double m = lg.total_w;
  std::vector<int> com(static_cast<std::size_t>(lg.n));
  std::iota(com.begin(), com.end(), 0);
  std::vector<double> sum_tot = lg.strength;  // per community

  std::map<int, double> kin;  // neighbor community -> incident weight, sorted
  for (int pass = 0; pass < 1000; ++pass) {
    bool moved = false;
    for (int v : order) {
      const int c_old = com[static_cast<std::size_t>(v)];
      const double k_v = lg.strength[static_cast<std::size_t>(v)];

      kin.clear();
      for (const auto& [u, w] : lg.adj[static_cast<std::size_t>(v)])
        kin[com[static_cast<std::size_t>(u)]] += w;

      sum_tot[static_cast<std::size_t>(c_old)] -= k_v;

      // staying put is the zero-gain default; a move needs strictly more, and
      // scanning ascending ids makes ties resolve to the lowest community
      int best_com = c_old;
      double best_gain = 0.0;
      for (const auto& [c, kv_in] : kin) {
        double gain = kv_in / m - sum_tot[static_cast<std::size_t>(c)] * k_v / (2.0 * m * m);
        if (gain > best_gain) {
          best_gain = gain;
          best_com = c;
        }
      }

      sum_tot[static_cast<std::size_t>(best_com)] += k_v;
      com[static_cast<std::size_t>(v)] = best_com;
      if (best_com != c_old) moved = true;
    }
    if (!moved) break;
  }
  return com;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<int>& com, int k) {
  LevelGraph out;
  out.n = k;
  out.total_w = lg.total_w;
  out.self_w.assign(static_cast<std::size_t>(k), 0.0);
  std::vector<std::map<int, double>> nb(static_cast<std::size_t>(k));
  for (int v = 0; v < lg.n; ++v) {
    int cv = com[static_cast<std::size_t>(v)];
    out.self_w[static_cast<std::size_t>(cv)] += lg.self_w[static_cast<std::size_t>(v)];
    for (const auto& [u, w] : lg.adj[static_cast<std::size_t>(v)]) {
      if (u <= v) continue;
      int cu = com[static_cast<std::size_t>(u)];
      if (cu == cv) {
        out.self_w[static_cast<std::size_t>(cv)] += w;
      } else {
        nb[static_cast<std::size_t>(cv)][cu] += w;
        nb[static_cast<std::size_t>(cu)][cv] += w;
      }
    }
  }
  out.adj.assign(static_cast<std::size_t>(k), {});
  for (int c = 0; c < k; ++c)
    out.adj[static_cast<std::size_t>(c)].assign(nb[static_cast<std::size_t>(c)].begin(),
                                                nb[static_cast<std::size_t>(c)].end());
  out.strength.assign(static_cast<std::size_t>(k), 0.0);
  for (int c = 0; c < k; ++c) {
    double s = 2.0 * out.self_w[static_cast<std::size_t>(c)];
    for (const auto& [u, w] : out.adj[static_cast<std::size_t>(c)]) s += w;
    out.strength[static_cast<std::size_t>(c)] = s;
  }
  return out;
}

}  // namespace

Partition louvain(const Graph& g, std::uint64_t seed) {
  const int n = g.node_count();
  Partition p;
  p.community.resize(static_cast<std::size_t>(n));
  std::iota(p.community.begin(), p.community.end(), 0);
  p.community_count = n;
  if (g.edge_count() == 0 || n <= 1) return p;

  LevelGraph lg = level_from_graph(g);
  std::vector<int> node_to_com = p.community;  // original node -> current level node
  Rng rng(seed);
  double q_prev = level_modularity(lg, node_to_com, n);  // singletons
  bool first = true;

  for (;;) {
    std::vector<int> order(static_cast<std::size_t>(lg.n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<int> com = one_level(lg, order);
    int k = renumber_dense(com);
    double q_new = level_modularity(lg, com, k);
    if (!first && q_new - q_prev <= 1e-7) break;
    first = false;
    q_prev = q_new;

    for (int v = 0; v < n; ++v)
      node_to_com[static_cast<std::size_t>(v)] =
          com[static_cast<std::size_t>(node_to_com[static_cast<std::size_t>(v)])];
    if (k == lg.n) break;  // no merges happened; another level cannot improve
    lg = aggregate(lg, com, k);
  }

  // dense labels in first-appearance order, so output is reproducible
  std::vector<int> remap(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    int& r = remap[static_cast<std::size_t>(node_to_com[static_cast<std::size_t>(v)])];
    if (r == -1) r = next++;
    p.community[static_cast<std::size_t>(v)] = r;
  }
  p.community_count = next;
  return p;
}

double modularity(const Graph& g, const Partition& p) {
  const int n = g.node_count();
  if (static_cast<int>(p.community.size()) != n)
    throw MeasureError(MeasureErrorKind::invalid_partition,
                       "partition size does not match node count");
  for (int c : p.community)
    if (c < 0 || c >= p.community_count)
      throw MeasureError(MeasureErrorKind::invalid_partition,
                         "community label outside [0, community_count)");
  const double m = static_cast<double>(g.edge_count());
  if (m <= 0.0) return 0.0;

  std::vector<double> e_c(static_cast<std::size_t>(p.community_count), 0.0);
  std::vector<double> d_c(static_cast<std::size_t>(p.community_count), 0.0);
  for (const Edge& e : g.edges()) {
    int cu = p.community[static_cast<std::size_t>(e.first)];
    int cv = p.community[static_cast<std::size_t>(e.second)];
    if (cu == cv) e_c[static_cast<std::size_t>(cu)] += 1.0;
  }
  for (int v = 0; v < n; ++v)
    d_c[static_cast<std::size_t>(p.community[static_cast<std::size_t>(v)])] += g.degree(v);

  double q = 0.0;
  for (int c = 0; c < p.community_count; ++c) {
    double dc = d_c[static_cast<std::size_t>(c)] / (2.0 * m);
    q += e_c[static_cast<std::size_t>(c)] / m - dc * dc;
  }
  return q;
}

std::vector<double> relative_community_sizes(const Partition& p, int node_count) {
  if (node_count <= 0)
    throw MeasureError(MeasureErrorKind::invalid_partition, "node count must be positive");
  std::vector<int> counts(static_cast<std::size_t>(p.community_count), 0);
  for (int c : p.community) {
    if (c < 0 || c >= p.community_count)
      throw MeasureError(MeasureErrorKind::invalid_partition,
                         "community label outside [0, community_count)");
    ++counts[static_cast<std::size_t>(c)];
  }
  std::vector<double> out;
  out.reserve(counts.size());
  for (int c : counts) out.push_back(static_cast<double>(c) / node_count);
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

FeatureProfile compute_features(const Graph& g) {
  CanonicalForm cf = canonical_form(g);
  const int n = g.node_count();

  FeatureProfile fp;
  fp.id = g.id();
  fp.node_count = n;
  fp.edge_count = g.edge_count();
  fp.structure_hash = cf.hash;

  int max_deg = 0;
  for (int v = 0; v < n; ++v) max_deg = std::max(max_deg, cf.graph.degree(v));
  fp.degree_dist.assign(static_cast<std::size_t>(max_deg) + 1, 0.0);
  for (int v = 0; v < n; ++v)
    fp.degree_dist[static_cast<std::size_t>(cf.graph.degree(v))] += 1.0 / n;

  std::vector<double> cc = local_clustering(cf.graph);
  std::vector<double> bc = betweenness(cf.graph);
  fp.clustering_values.resize(static_cast<std::size_t>(n));
  fp.betweenness_values.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    int cv = cf.to_canonical[static_cast<std::size_t>(v)];
    fp.clustering_values[static_cast<std::size_t>(v)] = cc[static_cast<std::size_t>(cv)];
    fp.betweenness_values[static_cast<std::size_t>(v)] = bc[static_cast<std::size_t>(cv)];
  }

  Partition part = louvain(cf.graph, cf.hash);
  fp.community_sizes = relative_community_sizes(part, n);
  fp.modularity = modularity(cf.graph, part);
  return fp;
}

std::string profile_to_json(const FeatureProfile& p) {
  nlohmann::json j;
  j["id"] = p.id;
  j["node_count"] = p.node_count;
  j["edge_count"] = p.edge_count;
  j["degree_dist"] = p.degree_dist;
  j["clustering"] = p.clustering_values;
  j["betweenness"] = p.betweenness_values;
  j["community_sizes"] = p.community_sizes;
  j["modularity"] = p.modularity;
  j["structure_hash"] = to_hex(p.structure_hash);
  return j.dump() + "\n";
}

FeatureProfile profile_from_json(const std::string& text, const std::string& origin) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw GraphError(GraphErrorKind::parse, origin + ": invalid JSON");
  try {
    FeatureProfile p;
    p.id = j.at("id").get<std::string>();
    p.node_count = j.at("node_count").get<int>();
    p.edge_count = j.at("edge_count").get<int>();
    p.degree_dist = j.at("degree_dist").get<std::vector<double>>();
    p.clustering_values = j.at("clustering").get<std::vector<double>>();
    p.betweenness_values = j.at("betweenness").get<std::vector<double>>();
    p.community_sizes = j.at("community_sizes").get<std::vector<double>>();
    p.modularity = j.at("modularity").get<double>();
    p.structure_hash = std::stoull(j.at("structure_hash").get<std::string>(), nullptr, 16);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(GraphErrorKind::parse, origin + ": " + e.what());
  }
}

void save_profile(const FeatureProfile& p, const std::filesystem::path& path) {
  write_file_atomic(path, profile_to_json(p));
}

FeatureProfile load_profile(const std::filesystem::path& path) {
  return profile_from_json(read_file(path), path.string());
}

}  // namespace graphsim
