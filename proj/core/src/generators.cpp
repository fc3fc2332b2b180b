#include "graphsim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "graphsim/errors.hpp"

namespace graphsim {

namespace {

long long pair_count(int n) {
  return static_cast<long long>(n) * (n - 1) / 2;
}

std::string format_params(const GeneratorParams& p) {
  char buf[160];
  switch (p.generator) {
    case Generator::GNM:
      std::snprintf(buf, sizeof(buf), "gnm(n=%d, m=%lld)", p.target_n, p.gnm_m);
      break;
    case Generator::BBA:
      std::snprintf(buf, sizeof(buf), "bba(n=%d, attach_m=%d)", p.target_n, p.bba_attach_m);
      break;
    case Generator::NWS:
      std::snprintf(buf, sizeof(buf), "nws(n=%d, ring_k=%d, p=%g)", p.target_n,
                    p.nws_ring_k, p.nws_shortcut_p);
      break;
    case Generator::SBM:
      std::snprintf(buf, sizeof(buf), "sbm(n=%d, blocks=%zu, p_in=%g, p_out=%g)",
                    p.target_n, p.sbm_block_sizes.size(), p.sbm_p_in, p.sbm_p_out);
      break;
  }
  return buf;
}

}  // namespace

void ClassGrid::validate() const {
  int prev_n = 0;
  for (const auto& [label, n] : size_classes) {
    if (label.empty()) throw ParamError("size class with empty label");
    if (n <= prev_n)
      throw ParamError("size classes must be strictly increasing: " + label);
    prev_n = n;
  }
  double prev_d = 0.0;
  for (const auto& [label, d] : density_classes) {
    if (label.empty()) throw ParamError("density class with empty label");
    if (d <= prev_d)
      throw ParamError("density classes must be strictly increasing: " + label);
    prev_d = d;
  }
  if (!(tolerance > 0.0 && tolerance < 1.0))
    throw ParamError("density tolerance must be in (0,1)");
}

int ClassGrid::size_of(const std::string& label) const {
  for (const auto& [l, n] : size_classes)
    if (l == label) return n;
  throw ParamError("unknown size class: " + label);
}

double ClassGrid::density_of(const std::string& label) const {
  for (const auto& [l, d] : density_classes)
    if (l == label) return d;
  throw ParamError("unknown density class: " + label);
}

void GeneratorParams::validate() const {
  if (target_n < 1) throw ParamError("target_n must be positive");
  switch (generator) {
    case Generator::GNM:
      if (gnm_m < 0) throw ParamError("gnm: negative edge count");
      if (gnm_m > pair_count(target_n))
        throw ParamError("gnm: edge count exceeds simple-graph maximum");
      break;
    case Generator::BBA:
      if (bba_attach_m < 1) throw ParamError("bba: attach_m must be >= 1");
      if (bba_attach_m >= target_n && target_n > 1)
        throw ParamError("bba: attach_m must be < n");
      break;
    case Generator::NWS:
      if (nws_ring_k < 2 || nws_ring_k % 2 != 0)
        throw ParamError("nws: ring_k must be even and >= 2");
      if (nws_ring_k >= target_n)
        throw ParamError("nws: ring_k must be < n");
      if (nws_shortcut_p < 0.0 || nws_shortcut_p > 1.0)
        throw ParamError("nws: shortcut probability outside [0,1]");
      break;
    case Generator::SBM: {
      if (sbm_block_sizes.empty()) throw ParamError("sbm: no blocks");
      long long total = 0;
      for (int b : sbm_block_sizes) {
        if (b < 1) throw ParamError("sbm: block size must be >= 1");
        total += b;
      }
      if (total != target_n)
        throw ParamError("sbm: block sizes must sum to target_n");
      if (sbm_p_in < 0.0 || sbm_p_in > 1.0 || sbm_p_out < 0.0 || sbm_p_out > 1.0)
        throw ParamError("sbm: probabilities outside [0,1]");
      break;
    }
  }
}

Graph gen_gnm(int n, long long m, std::uint64_t seed) {
  if (n < 1) throw ParamError("gnm: n must be positive");
  const long long total = pair_count(n);
  if (m < 0 || m > total)
    throw ParamError("gnm: edge count outside [0, n*(n-1)/2]");

  Rng rng(seed);
  // Rejection-sample distinct unordered pairs. When more than half of all
  // pairs are requested, sample the complement instead so the expected number
  // of draws stays O(m).
  const bool complement = m > total / 2;
  const long long want = complement ? total - m : m;
  std::unordered_set<long long> chosen;
  chosen.reserve(static_cast<std::size_t>(want) * 2 + 1);
  while (static_cast<long long>(chosen.size()) < want) {
    int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    chosen.insert(static_cast<long long>(u) * n + v);
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  if (complement) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!chosen.count(static_cast<long long>(u) * n + v)) edges.emplace_back(u, v);
  } else {
    for (long long key : chosen)
      edges.emplace_back(static_cast<int>(key / n), static_cast<int>(key % n));
  }
  return Graph(n, std::move(edges));
}

Graph gen_bba(int n, int attach_m, std::uint64_t seed) {
  if (n < 1) throw ParamError("bba: n must be positive");
  if (attach_m < 1) throw ParamError("bba: attach_m must be >= 1");
  if (n > 1 && attach_m >= n) throw ParamError("bba: attach_m must be < n");

  Rng rng(seed);
  std::vector<Edge> edges;
  // Nodes 0..attach_m-1 form a path so the core is connected from the start.
  std::vector<int> repeated;  // one entry per edge endpoint: degree-weighted urn
  for (int i = 0; i + 1 < attach_m; ++i) {
    edges.emplace_back(i, i + 1);
    repeated.push_back(i);
    repeated.push_back(i + 1);
  }
  for (int v = attach_m; v < n; ++v) {
    std::vector<int> targets;
    targets.reserve(static_cast<std::size_t>(attach_m));
    while (static_cast<int>(targets.size()) < attach_m) {
      int t;
      if (repeated.empty()) {
        // only possible for attach_m == 1 before the first attachment
        t = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
      } else {
        t = repeated[rng.below(repeated.size())];
      }
      if (std::find(targets.begin(), targets.end(), t) != targets.end()) continue;
      targets.push_back(t);
    }
    for (int t : targets) {
      edges.emplace_back(t, v);
      repeated.push_back(t);
      repeated.push_back(v);
    }
  }
  return Graph(n, std::move(edges));
}

Graph gen_nws(int n, int ring_k, double shortcut_p, std::uint64_t seed) {
  if (n < 3) throw ParamError("nws: n must be >= 3");
  if (ring_k < 2 || ring_k % 2 != 0) throw ParamError("nws: ring_k must be even and >= 2");
  if (ring_k >= n) throw ParamError("nws: ring_k must be < n");
  if (shortcut_p < 0.0 || shortcut_p > 1.0)
    throw ParamError("nws: shortcut probability outside [0,1]");

  std::vector<Edge> lattice;
  for (int j = 1; j <= ring_k / 2; ++j)
    for (int i = 0; i < n; ++i) {
      int u = i, v = (i + j) % n;
      if (u > v) std::swap(u, v);
      lattice.emplace_back(u, v);
    }

  std::unordered_set<long long> present;
  present.reserve(lattice.size() * 3);
  for (const Edge& e : lattice)
    present.insert(static_cast<long long>(e.first) * n + e.second);

  Rng rng(seed);
  std::vector<Edge> edges = lattice;
  // One shortcut opportunity per lattice edge; existing edges are kept, so
  // the ring (and connectivity) always survives.
  for (const Edge& e : lattice) {
    if (!rng.bernoulli(shortcut_p)) continue;
    const int u = e.first;
    for (int tries = 0; tries < 100; ++tries) {
      int w = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (w == u) continue;
      int a = u, b = w;
      if (a > b) std::swap(a, b);
      long long key = static_cast<long long>(a) * n + b;
      if (present.count(key)) continue;
      present.insert(key);
      edges.emplace_back(a, b);
      break;
    }
  }
  return Graph(n, std::move(edges));
}

Graph gen_sbm(const std::vector<int>& block_sizes, double p_in, double p_out,
              std::uint64_t seed) {
  if (block_sizes.empty()) throw ParamError("sbm: no blocks");
  long long n_total = 0;
  for (int b : block_sizes) {
    if (b < 1) throw ParamError("sbm: block size must be >= 1");
    n_total += b;
  }
  if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
    throw ParamError("sbm: probabilities outside [0,1]");
  const int n = static_cast<int>(n_total);

  std::vector<int> block_of(static_cast<std::size_t>(n));
  int next = 0, block = 0;
  for (int b : block_sizes) {
    for (int i = 0; i < b; ++i) block_of[static_cast<std::size_t>(next++)] = block;
    ++block;
  }

  Rng rng(seed);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double p = block_of[static_cast<std::size_t>(u)] == block_of[static_cast<std::size_t>(v)]
                     ? p_in
                     : p_out;
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  return Graph(n, std::move(edges));
}

Graph draw(const GeneratorParams& params, std::uint64_t seed) {
  params.validate();
  switch (params.generator) {
    case Generator::GNM:
      return gen_gnm(params.target_n, params.gnm_m, seed);
    case Generator::BBA:
      return gen_bba(params.target_n, params.bba_attach_m, seed);
    case Generator::NWS:
      return gen_nws(params.target_n, params.nws_ring_k, params.nws_shortcut_p, seed);
    case Generator::SBM:
      return gen_sbm(params.sbm_block_sizes, params.sbm_p_in, params.sbm_p_out, seed);
  }
  throw ParamError("unknown generator");
}

GeneratorParams params_for_target(Generator generator, const std::string& size_class,
                                  const std::string& density_class, const ClassGrid& grid) {
  grid.validate();
  const int n = grid.size_of(size_class);
  const double d = grid.density_of(density_class);
  // Deviation slack keeps boundary cases (deviation exactly == tolerance)
  // from flapping on floating-point noise.
  const double slack = 1e-9;

  GeneratorParams p;
  p.generator = generator;
  p.target_n = n;
  p.target_linear_density = d;

  switch (generator) {
    case Generator::GNM: {
      p.gnm_m = std::llround(d * n);
      if (p.gnm_m > pair_count(n))
        throw ParamError("gnm: target density exceeds simple-graph maximum for n=" +
                         std::to_string(n));
      double achieved = static_cast<double>(p.gnm_m) / n;
      if (std::abs(achieved - d) > grid.tolerance * d + slack)
        throw ParamError("gnm: rounded edge count misses target density");
      break;
    }
    case Generator::BBA: {
      p.bba_attach_m = std::max(1, static_cast<int>(std::llround(d)));
      if (p.bba_attach_m >= n) throw ParamError("bba: attach_m >= n for " + size_class);
      long long m = static_cast<long long>(p.bba_attach_m) * (n - p.bba_attach_m) +
                    p.bba_attach_m - 1;
      double achieved = static_cast<double>(m) / n;
      if (std::abs(achieved - d) > grid.tolerance * d + slack)
        throw ParamError("bba: no attachment count reaches density " +
                         density_class + " at " + size_class);
      break;
    }
    case Generator::NWS: {
      int half_k = std::max(1, static_cast<int>(std::floor(d)));
      p.nws_ring_k = 2 * half_k;
      if (p.nws_ring_k >= n) throw ParamError("nws: ring_k >= n for " + size_class);
      double prob = d / half_k - 1.0;
      p.nws_shortcut_p = std::clamp(prob, 0.0, 1.0);
      double achieved = half_k * (1.0 + p.nws_shortcut_p);
      if (std::abs(achieved - d) > grid.tolerance * d + slack)
        throw ParamError("nws: no shortcut probability reaches density " +
                         density_class + " at " + size_class);
      break;
    }
    case Generator::SBM: {
      int blocks = std::max(2, static_cast<int>(std::llround(n / 25.0)));
      if (blocks > n) blocks = n;
      p.sbm_block_sizes.assign(static_cast<std::size_t>(blocks), n / blocks);
      for (int i = 0; i < n % blocks; ++i) p.sbm_block_sizes[static_cast<std::size_t>(i)] += 1;

      double s_in = 0.0;
      for (int b : p.sbm_block_sizes) s_in += static_cast<double>(b) * (b - 1) / 2.0;
      double s_out = static_cast<double>(pair_count(n)) - s_in;
      const double ratio = 8.0;  // within-block vs between-block edge probability
      double p_out = d * n / (ratio * s_in + s_out);
      double p_in = ratio * p_out;
      if (p_in > 1.0 || p_out > 1.0)
        throw ParamError("sbm: target density needs probability > 1 at " + size_class);
      p.sbm_p_in = p_in;
      p.sbm_p_out = p_out;
      break;
    }
  }
  p.validate();
  return p;
}

namespace {

// Connected components as node lists, ordered by smallest member.
std::vector<std::vector<int>> components_of(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] != -1) continue;
    int c = static_cast<int>(out.size());
    out.emplace_back();
    comp[static_cast<std::size_t>(s)] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out[static_cast<std::size_t>(c)].push_back(v);
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (comp[static_cast<std::size_t>(w)] == -1) {
          comp[static_cast<std::size_t>(w)] = c;
          stack.push_back(w);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

// Indices (into `edges`) of edges that are NOT bridges; iterative DFS
// (Tarjan lowpoint).
std::vector<std::size_t> non_bridge_edges(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[static_cast<std::size_t>(edges[i].first)].emplace_back(edges[i].second, i);
    adj[static_cast<std::size_t>(edges[i].second)].emplace_back(edges[i].first, i);
  }
  std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<char> is_bridge(edges.size(), 0);
  int timer = 0;

  struct Frame {
    int v;
    std::size_t via_edge;  // edge used to enter v; npos for roots
    std::size_t next_child = 0;
  };
  constexpr std::size_t npos = static_cast<std::size_t>(-1);

  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> stack;
    stack.push_back({root, npos});
    disc[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto& nbrs = adj[static_cast<std::size_t>(f.v)];
      if (f.next_child < nbrs.size()) {
        auto [w, eid] = nbrs[f.next_child++];
        if (eid == f.via_edge) continue;
        if (disc[static_cast<std::size_t>(w)] == -1) {
          disc[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = timer++;
          stack.push_back({w, eid});
        } else {
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)], disc[static_cast<std::size_t>(w)]);
        }
      } else {
        int v = f.v;
        std::size_t via = f.via_edge;
        stack.pop_back();
        if (!stack.empty()) {
          int parent = stack.back().v;
          low[static_cast<std::size_t>(parent)] =
              std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(v)]);
          if (low[static_cast<std::size_t>(v)] > disc[static_cast<std::size_t>(parent)])
            is_bridge[via] = 1;
        }
      }
    }
  }

  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (!is_bridge[i]) out.push_back(i);
  return out;
}

}  // namespace

bool repair_connect(Graph& g, Rng& rng) {
  const int n = g.node_count();
  std::vector<Edge> edges = g.edges();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : edges) {
    adj[static_cast<std::size_t>(e.first)].push_back(e.second);
    adj[static_cast<std::size_t>(e.second)].push_back(e.first);
  }

  auto comps = components_of(n, adj);
  while (comps.size() > 1) {
    auto cycle_edges = non_bridge_edges(n, edges);
    if (cycle_edges.empty()) return false;
    std::size_t victim = cycle_edges[rng.below(cycle_edges.size())];

    // Join the two lowest-numbered components; removing a cycle edge does not
    // change the component structure.
    const auto& ca = comps[0];
    const auto& cb = comps[1];
    int a = ca[rng.below(ca.size())];
    int b = cb[rng.below(cb.size())];

    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(victim));
    if (a > b) std::swap(a, b);
    edges.emplace_back(a, b);

    adj.assign(static_cast<std::size_t>(n), {});
    for (const Edge& e : edges) {
      adj[static_cast<std::size_t>(e.first)].push_back(e.second);
      adj[static_cast<std::size_t>(e.second)].push_back(e.first);
    }
    comps = components_of(n, adj);
  }
  g = Graph(n, std::move(edges), g.id());
  return true;
}

GeneratedGraph generate_connected(const GraphSpec& spec, const ClassGrid& grid,
                                  const GenerateOptions& opts) {
  if (opts.max_attempts < 1) throw ParamError("max_attempts must be >= 1");
  spec.params.validate();
  const double target = spec.params.target_linear_density;

  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    const std::uint64_t draw_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(attempt));
    Graph g = draw(spec.params, draw_seed);
    bool repaired = false;

    if (!is_connected(g)) {
      if (opts.policy == ConnectivityPolicy::resample_then_repair &&
          attempt >= opts.repair_after) {
        Rng repair_rng(derive_seed(draw_seed, 1));
        if (!repair_connect(g, repair_rng)) continue;
        repaired = true;
      } else {
        continue;
      }
    }

    const double achieved = g.linear_density();
    if (opts.enforce_density && target > 0.0 &&
        std::abs(achieved - target) > grid.tolerance * target + 1e-9)
      continue;

    return {g.with_id(spec.id), attempt + 1, repaired, achieved};
  }

  throw GenerationError("no acceptable graph after " + std::to_string(opts.max_attempts) +
                        " attempts for " + (spec.id.empty() ? format_params(spec.params) : spec.id) +
                        " [" + format_params(spec.params) + "]");
}

}  // namespace graphsim
