#include "graphsim/canonical.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>

namespace graphsim {

namespace {

// Renumber arbitrary color values to 0..k-1 preserving value order; returns k.
int renumber(std::vector<int>& color) {
  std::vector<int> values = color;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (int& c : color)
    c = static_cast<int>(std::lower_bound(values.begin(), values.end(), c) - values.begin());
  return static_cast<int>(values.size());
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const Graph& g) : g_(g), n_(g.node_count()) {}

  CanonicalForm run() {
    std::vector<int> color(static_cast<std::size_t>(n_), 0);
    search(std::move(color));
    Graph canon = permuted(g_, best_perm_);
    std::uint64_t h = edge_list_hash(canon);
    return {std::move(canon), std::move(best_perm_), h};
  }

 private:
  // One refinement pass: each node keyed by (own color, sorted neighbor
  // colors); new colors assigned in key order. Only ever splits cells.
  int refine_round(std::vector<int>& color) const {
    std::vector<std::vector<int>> key(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) {
      auto& k = key[static_cast<std::size_t>(v)];
      const auto& nb = g_.neighbors(v);
      k.reserve(nb.size() + 1);
      k.push_back(color[static_cast<std::size_t>(v)]);
      for (int w : nb) k.push_back(color[static_cast<std::size_t>(w)]);
      std::sort(k.begin() + 1, k.end());
    }
    std::vector<int> order(static_cast<std::size_t>(n_));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)];
    });
    int next = -1;
    const std::vector<int>* prev = nullptr;
    for (int v : order) {
      const auto& k = key[static_cast<std::size_t>(v)];
      if (prev == nullptr || k != *prev) {
        ++next;
        prev = &k;
      }
      color[static_cast<std::size_t>(v)] = next;
    }
    return next + 1;
  }

  void refine(std::vector<int>& color) const {
    int k = renumber(color);
    for (;;) {
      std::vector<int> before = color;
      int k2 = refine_round(color);
      if (k2 == k) {
        color = std::move(before);  // partition unchanged; keep stable numbering
        return;
      }
      k = k2;
    }
  }

  // Adjacent or non-adjacent twins: swapping them is an automorphism, so the
  // branch for w duplicates the branch for v.
  bool twins(int v, int w) const {
    const auto& nv = g_.neighbors(v);
    const auto& nw = g_.neighbors(w);
    std::size_t i = 0, j = 0;
    while (i < nv.size() || j < nw.size()) {
      if (i < nv.size() && nv[i] == w) {
        ++i;
        continue;
      }
      if (j < nw.size() && nw[j] == v) {
        ++j;
        continue;
      }
      if (i == nv.size() || j == nw.size()) return false;
      if (nv[i] != nw[j]) return false;
      ++i;
      ++j;
    }
    return true;
  }

  void search(std::vector<int> color) {
    refine(color);

    // count cell sizes
    int k = 0;
    for (int c : color) k = std::max(k, c + 1);
    std::vector<int> cell_size(static_cast<std::size_t>(k), 0);
    for (int c : color) ++cell_size[static_cast<std::size_t>(c)];

    int target = -1;
    for (int c = 0; c < k; ++c) {
      int s = cell_size[static_cast<std::size_t>(c)];
      if (s < 2) continue;
      if (target == -1 || s < cell_size[static_cast<std::size_t>(target)]) target = c;
    }

    if (target == -1) {  // discrete: color is a permutation
      consider_leaf(color);
      return;
    }

    std::vector<int> members;
    for (int v = 0; v < n_; ++v)
      if (color[static_cast<std::size_t>(v)] == target) members.push_back(v);

    std::vector<int> tried;
    for (int v : members) {
      bool dup = false;
      for (int w : tried)
        if (twins(v, w)) {
          dup = true;
          break;
        }
      if (dup) continue;
      tried.push_back(v);

      // split target cell into {v} followed by the rest; other cells intact
      std::vector<int> child(color.size());
      for (int u = 0; u < n_; ++u)
        child[static_cast<std::size_t>(u)] = 2 * color[static_cast<std::size_t>(u)] + (u == v ? 0 : 1);
      search(std::move(child));
    }
  }

  void consider_leaf(const std::vector<int>& perm) {
    std::vector<std::uint64_t> sig;
    sig.reserve(g_.edges().size());
    for (const Edge& e : g_.edges()) {
      std::uint64_t a = static_cast<std::uint64_t>(perm[static_cast<std::size_t>(e.first)]);
      std::uint64_t b = static_cast<std::uint64_t>(perm[static_cast<std::size_t>(e.second)]);
      if (a > b) std::swap(a, b);
      sig.push_back((a << 32) | b);
    }
    std::sort(sig.begin(), sig.end());
    if (!have_best_ || sig < best_sig_) {
      best_sig_ = std::move(sig);
      best_perm_ = perm;
      have_best_ = true;
    }
  }

  const Graph& g_;
  int n_;
  bool have_best_ = false;
  std::vector<std::uint64_t> best_sig_;
  std::vector<int> best_perm_;
};

// ---- forests ---------------------------------------------------------------
//
// The branching search degenerates on trees with many isomorphic subtrees
// (preferential attachment with one edge per node is the worst case in this
// codebase), so forests take an exact rooted-encoding route instead: root each
// component at its center, order children by subtree encoding, order
// components by encoding, and label in that traversal order.

// Component id per node, ids in order of first appearance.
std::vector<int> component_ids(const Graph& g, int* count_out) {
  int n = g.node_count();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int count = 0;
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] != -1) continue;
    comp[static_cast<std::size_t>(s)] = count;
    queue.assign(1, s);
    while (!queue.empty()) {
      int v = queue.back();
      queue.pop_back();
      for (int w : g.neighbors(v))
        if (comp[static_cast<std::size_t>(w)] == -1) {
          comp[static_cast<std::size_t>(w)] = count;
          queue.push_back(w);
        }
    }
    ++count;
  }
  if (count_out) *count_out = count;
  return comp;
}

class ForestCanonicalizer {
 public:
  explicit ForestCanonicalizer(const Graph& g) : g_(g), n_(g.node_count()) {}

  CanonicalForm run() {
    int comp_count = 0;
    std::vector<int> comp = component_ids(g_, &comp_count);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(comp_count));
    for (int v = 0; v < n_; ++v) members[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])].push_back(v);

    std::vector<CanonComponent> comps;
    comps.reserve(members.size());
    for (const std::vector<int>& m : members) {
      CanonComponent best;
      for (int root : centers(m)) {
        CanonComponent cand = encode_from(root);
        if (best.order.empty() || cand.encoding < best.encoding) best = std::move(cand);
      }
      comps.push_back(std::move(best));
    }
    std::stable_sort(comps.begin(), comps.end(),
                     [](const CanonComponent& a, const CanonComponent& b) {
                       return a.encoding < b.encoding;
                     });

    std::vector<int> perm(static_cast<std::size_t>(n_));
    int next = 0;
    for (const CanonComponent& c : comps)
      for (int v : c.order) perm[static_cast<std::size_t>(v)] = next++;

    Graph canon = permuted(g_, perm);
    std::uint64_t h = edge_list_hash(canon);
    return {std::move(canon), std::move(perm), h};
  }

 private:
  struct CanonComponent {
    std::string encoding;
    std::vector<int> order;  // nodes in canonical visit order
  };

  // Center(s) of one tree component: peel leaf layers until at most two
  // nodes remain.
  std::vector<int> centers(const std::vector<int>& members) const {
    if (members.size() <= 2) return members;
    std::vector<int> degree(static_cast<std::size_t>(n_), 0);
    std::vector<char> removed(static_cast<std::size_t>(n_), 0);
    std::vector<int> layer;
    for (int v : members) {
      degree[static_cast<std::size_t>(v)] = g_.degree(v);
      if (degree[static_cast<std::size_t>(v)] <= 1) layer.push_back(v);
    }
    std::size_t remaining = members.size();
    while (remaining > 2) {
      std::vector<int> next_layer;
      for (int v : layer) {
        removed[static_cast<std::size_t>(v)] = 1;
        --remaining;
        for (int w : g_.neighbors(v)) {
          if (removed[static_cast<std::size_t>(w)]) continue;
          if (--degree[static_cast<std::size_t>(w)] == 1) next_layer.push_back(w);
        }
      }
      layer = std::move(next_layer);
    }
    std::vector<int> out;
    for (int v : members)
      if (!removed[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
  }

  // Rooted canonical encoding plus the node order it induces: children sorted
  // by encoding, labels assigned preorder. Subtrees with equal encodings are
  // isomorphic, so their relative order cannot change the canonical edge set.
  CanonComponent encode_from(int root) const {
    // BFS to orient the tree
    std::vector<int> parent(static_cast<std::size_t>(n_), -2);
    std::vector<int> bfs;
    parent[static_cast<std::size_t>(root)] = -1;
    bfs.push_back(root);
    for (std::size_t i = 0; i < bfs.size(); ++i) {
      int v = bfs[i];
      for (int w : g_.neighbors(v))
        if (parent[static_cast<std::size_t>(w)] == -2) {
          parent[static_cast<std::size_t>(w)] = v;
          bfs.push_back(w);
        }
    }
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n_));
    for (int v : bfs)
      if (parent[static_cast<std::size_t>(v)] >= 0)
        children[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])].push_back(v);

    // encodings bottom-up (reverse BFS order)
    std::vector<std::string> enc(static_cast<std::size_t>(n_));
    for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
      int v = *it;
      auto& ch = children[static_cast<std::size_t>(v)];
      std::sort(ch.begin(), ch.end(), [&](int a, int b) {
        const std::string& ea = enc[static_cast<std::size_t>(a)];
        const std::string& eb = enc[static_cast<std::size_t>(b)];
        return ea != eb ? ea < eb : a < b;
      });
      std::string& e = enc[static_cast<std::size_t>(v)];
      e = "(";
      for (int c : ch) e += enc[static_cast<std::size_t>(c)];
      e += ")";
    }

    // preorder traversal in child order
    CanonComponent out;
    out.encoding = enc[static_cast<std::size_t>(root)];
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out.order.push_back(v);
      const auto& ch = children[static_cast<std::size_t>(v)];
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return out;
  }

  const Graph& g_;
  int n_;
};

}  // namespace

CanonicalForm canonical_form(const Graph& g) {
  int comp_count = 0;
  component_ids(g, &comp_count);
  if (g.edge_count() == g.node_count() - comp_count)
    return ForestCanonicalizer(g).run();
  return Canonicalizer(g).run();
}

std::uint64_t canonical_hash(const Graph& g) { return canonical_form(g).hash; }

}  // namespace graphsim
