#include <doctest.h>

#include <algorithm>
#include <set>

#include "graphsim/errors.hpp"
#include "graphsim/generators.hpp"
#include "graphsim/graph.hpp"
#include "graphsim/rng.hpp"

using namespace graphsim;

namespace {

long long max_edges(int n) { return static_cast<long long>(n) * (n - 1) / 2; }

}  // namespace

TEST_CASE("class grid validates labels and ordering") {
  ClassGrid grid;
  CHECK_NOTHROW(grid.validate());
  CHECK(grid.size_of("S3") == 100);
  CHECK(grid.density_of("D2") == doctest::Approx(2.0));
  CHECK_THROWS_AS(grid.size_of("S9"), ParamError);
  CHECK_THROWS_AS(grid.density_of("dense"), ParamError);

  ClassGrid bad = grid;
  bad.size_classes[2].second = 10;  // not increasing
  CHECK_THROWS_AS(bad.validate(), ParamError);

  bad = grid;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), ParamError);
  bad.tolerance = 1.0;
  CHECK_THROWS_AS(bad.validate(), ParamError);
}

TEST_CASE("gnm produces the exact edge count") {
  for (auto [n, m] : {std::pair<int, long long>{10, 0},
                      {10, 15},
                      {10, 45},   // complete: complement sampling path
                      {10, 40},   // dense: complement sampling path
                      {50, 60}}) {
    Graph g = gen_gnm(n, m, 7);
    CHECK(g.node_count() == n);
    CHECK(static_cast<long long>(g.edge_count()) == m);
  }
  // complete graph has every pair
  Graph k10 = gen_gnm(10, 45, 3);
  for (int u = 0; u < 10; ++u)
    for (int v = u + 1; v < 10; ++v) CHECK(k10.has_edge(u, v));
}

TEST_CASE("gnm is deterministic in the seed") {
  Graph a = gen_gnm(30, 45, 42);
  Graph b = gen_gnm(30, 45, 42);
  Graph c = gen_gnm(30, 45, 43);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());
}

TEST_CASE("gnm rejects impossible parameters") {
  CHECK_THROWS_AS(gen_gnm(0, 0, 1), ParamError);
  CHECK_THROWS_AS(gen_gnm(5, -1, 1), ParamError);
  CHECK_THROWS_AS(gen_gnm(5, max_edges(5) + 1, 1), ParamError);
}

TEST_CASE("bba edge count follows the attachment formula") {
  for (auto [n, m] : {std::pair<int, int>{25, 1}, {25, 2}, {25, 3}, {100, 2}}) {
    Graph g = gen_bba(n, m, 11);
    long long expect = static_cast<long long>(m) * (n - m) + m - 1;
    CHECK(g.node_count() == n);
    CHECK(static_cast<long long>(g.edge_count()) == expect);
    CHECK(is_connected(g));
  }
}

TEST_CASE("bba with single attachment is a tree") {
  Graph g = gen_bba(40, 1, 5);
  CHECK(g.edge_count() == 39);
  CHECK(is_connected(g));
}

TEST_CASE("bba grows hubs") {
  // Degree-proportional attachment concentrates edges; a uniform-attachment
  // graph of this size would top out around degree 8.
  Graph g = gen_bba(300, 2, 17);
  int max_deg = 0;
  for (int v = 0; v < g.node_count(); ++v) max_deg = std::max(max_deg, g.degree(v));
  CHECK(max_deg >= 12);
}

TEST_CASE("bba rejects bad parameters") {
  CHECK_THROWS_AS(gen_bba(10, 0, 1), ParamError);
  CHECK_THROWS_AS(gen_bba(10, 10, 1), ParamError);
}

TEST_CASE("nws with zero shortcut probability is the pure ring lattice") {
  const int n = 20, k = 4;
  Graph g = gen_nws(n, k, 0.0, 9);
  CHECK(g.edge_count() == n * k / 2);
  for (int v = 0; v < n; ++v) CHECK(g.degree(v) == k);
  // ring neighbors at offsets 1 and 2
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(0, 19));
  CHECK(g.has_edge(0, 18));
  CHECK_FALSE(g.has_edge(0, 3));
}

TEST_CASE("nws shortcuts only add edges") {
  const int n = 30, k = 4;
  const int lattice = n * k / 2;
  Graph g = gen_nws(n, k, 1.0, 9);
  CHECK(g.edge_count() >= lattice);
  CHECK(g.edge_count() <= 2 * lattice);
  CHECK(is_connected(g));
  // every lattice edge is still present
  for (int j = 1; j <= k / 2; ++j)
    for (int i = 0; i < n; ++i) CHECK(g.has_edge(i, (i + j) % n));
}

TEST_CASE("nws rejects bad parameters") {
  CHECK_THROWS_AS(gen_nws(2, 2, 0.5, 1), ParamError);
  CHECK_THROWS_AS(gen_nws(10, 3, 0.5, 1), ParamError);   // odd ring degree
  CHECK_THROWS_AS(gen_nws(10, 10, 0.5, 1), ParamError);  // ring degree >= n
  CHECK_THROWS_AS(gen_nws(10, 4, 1.5, 1), ParamError);
}

TEST_CASE("sbm extremes give cliques, complete graphs, empty graphs") {
  std::vector<int> blocks{4, 3, 5};

  Graph cliques = gen_sbm(blocks, 1.0, 0.0, 1);
  CHECK(cliques.node_count() == 12);
  CHECK(cliques.edge_count() == 6 + 3 + 10);
  CHECK_FALSE(is_connected(cliques));

  Graph complete = gen_sbm(blocks, 1.0, 1.0, 1);
  CHECK(static_cast<long long>(complete.edge_count()) == max_edges(12));

  Graph empty = gen_sbm(blocks, 0.0, 0.0, 1);
  CHECK(empty.edge_count() == 0);
}

TEST_CASE("sbm rejects bad parameters") {
  CHECK_THROWS_AS(gen_sbm({}, 0.5, 0.1, 1), ParamError);
  CHECK_THROWS_AS(gen_sbm({3, 0}, 0.5, 0.1, 1), ParamError);
  CHECK_THROWS_AS(gen_sbm({3, 3}, 1.5, 0.1, 1), ParamError);
}

TEST_CASE("draw dispatches to the family generators") {
  GeneratorParams p;
  p.generator = Generator::GNM;
  p.target_n = 12;
  p.gnm_m = 20;
  CHECK(draw(p, 99).edges() == gen_gnm(12, 20, 99).edges());

  p = {};
  p.generator = Generator::NWS;
  p.target_n = 12;
  p.nws_ring_k = 2;
  p.nws_shortcut_p = 0.3;
  CHECK(draw(p, 99).edges() == gen_nws(12, 2, 0.3, 99).edges());
}

TEST_CASE("params_for_target matches class targets per family") {
  ClassGrid grid;

  SUBCASE("gnm rounds the edge count") {
    auto p = params_for_target(Generator::GNM, "S2", "D3", grid);
    CHECK(p.gnm_m == 175);  // 3.5 * 50
    CHECK(p.target_n == 50);
  }

  SUBCASE("bba picks the nearest attachment count") {
    auto p1 = params_for_target(Generator::BBA, "S1", "D1", grid);
    CHECK(p1.bba_attach_m == 1);
    auto p2 = params_for_target(Generator::BBA, "S3", "D2", grid);
    CHECK(p2.bba_attach_m == 2);
  }

  SUBCASE("nws splits density into ring degree and shortcut probability") {
    auto p1 = params_for_target(Generator::NWS, "S2", "D1", grid);
    CHECK(p1.nws_ring_k == 2);
    CHECK(p1.nws_shortcut_p == doctest::Approx(0.2));
    auto p2 = params_for_target(Generator::NWS, "S2", "D2", grid);
    CHECK(p2.nws_ring_k == 4);
    CHECK(p2.nws_shortcut_p == doctest::Approx(0.0));
    auto p3 = params_for_target(Generator::NWS, "S2", "D3", grid);
    CHECK(p3.nws_ring_k == 6);
    CHECK(p3.nws_shortcut_p == doctest::Approx(3.5 / 3.0 - 1.0));
  }

  SUBCASE("sbm sizes blocks near 25 nodes and keeps the 8x probability ratio") {
    auto p = params_for_target(Generator::SBM, "S4", "D2", grid);
    CHECK(p.sbm_block_sizes.size() == 10);
    long long total = 0;
    for (int b : p.sbm_block_sizes) total += b;
    CHECK(total == 250);
    CHECK(p.sbm_p_in == doctest::Approx(8.0 * p.sbm_p_out));
    // expected edge count hits the density target exactly
    double s_in = 0.0;
    for (int b : p.sbm_block_sizes) s_in += static_cast<double>(b) * (b - 1) / 2.0;
    double s_out = static_cast<double>(max_edges(250)) - s_in;
    double expect_m = p.sbm_p_in * s_in + p.sbm_p_out * s_out;
    CHECK(expect_m == doctest::Approx(2.0 * 250).epsilon(1e-9));

    auto small = params_for_target(Generator::SBM, "S1", "D1", grid);
    CHECK(small.sbm_block_sizes.size() == 2);  // block count never drops below 2
  }

  SUBCASE("every cell of the default grid is feasible") {
    for (Generator gen :
         {Generator::GNM, Generator::BBA, Generator::NWS, Generator::SBM})
      for (const auto& [size, n] : grid.size_classes)
        for (const auto& [density, d] : grid.density_classes) {
          auto p = params_for_target(gen, size, density, grid);
          CHECK(p.target_n == n);
          CHECK(p.target_linear_density == doctest::Approx(d));
        }
  }
}

TEST_CASE("params_for_target rejects unreachable targets") {
  ClassGrid grid;
  grid.size_classes = {{{"T1", 4}, {"T2", 10}, {"T3", 20}, {"T4", 40}}};
  grid.density_classes = {{{"E1", 1.0}, {"E2", 2.0}, {"E3", 5.0}}};
  // n=4 cannot host 5.0*4 = 20 edges (max 6)
  CHECK_THROWS_AS(params_for_target(Generator::GNM, "T1", "E3", grid), ParamError);
  // attach_m = 5 at n=10 achieves ~2.9, far from 5.0
  CHECK_THROWS_AS(params_for_target(Generator::BBA, "T2", "E3", grid), ParamError);
}

TEST_CASE("generate_connected is deterministic and always connected") {
  ClassGrid grid;
  GraphSpec spec;
  spec.id = "gnm_test";
  spec.size_class = "S1";
  spec.density_class = "D1";
  spec.params = params_for_target(Generator::GNM, "S1", "D1", grid);
  spec.seed = 20240901;

  auto a = generate_connected(spec, grid);
  auto b = generate_connected(spec, grid);
  CHECK(is_connected(a.graph));
  CHECK(a.graph.edges() == b.graph.edges());
  CHECK(a.attempts == b.attempts);
  CHECK(a.graph.id() == "gnm_test");
  CHECK(a.achieved_density == doctest::Approx(a.graph.linear_density()));
}

TEST_CASE("generate_connected reports attempts on sparse draws") {
  // 25 nodes, 30 edges: random draws are frequently disconnected, so the
  // attempt counter should move for at least one of a handful of seeds.
  ClassGrid grid;
  GraphSpec spec;
  spec.params = params_for_target(Generator::GNM, "S1", "D1", grid);
  spec.size_class = "S1";
  spec.density_class = "D1";
  int total_attempts = 0;
  for (std::uint64_t s = 0; s < 6; ++s) {
    spec.seed = 1000 + s;
    auto r = generate_connected(spec, grid);
    CHECK(is_connected(r.graph));
    total_attempts += r.attempts;
  }
  CHECK(total_attempts > 6);
}

TEST_CASE("generate_connected throws when no draw can be connected") {
  ClassGrid grid;
  GraphSpec spec;
  spec.id = "too_sparse";
  spec.params.generator = Generator::GNM;
  spec.params.target_n = 20;
  spec.params.gnm_m = 10;  // below the n-1 connectivity floor
  spec.seed = 1;

  GenerateOptions opts;
  opts.max_attempts = 8;
  CHECK_THROWS_WITH_AS(generate_connected(spec, grid, opts),
                       doctest::Contains("too_sparse"), GenerationError);
}

TEST_CASE("repair policy connects structurally disconnected draws") {
  // Two planted cliques with no cross edges: never connected by resampling.
  ClassGrid grid;
  GraphSpec spec;
  spec.id = "split_cliques";
  spec.params.generator = Generator::SBM;
  spec.params.target_n = 16;
  spec.params.sbm_block_sizes = {8, 8};
  spec.params.sbm_p_in = 1.0;
  spec.params.sbm_p_out = 0.0;
  spec.seed = 77;

  GenerateOptions resample;
  resample.max_attempts = 10;
  CHECK_THROWS_AS(generate_connected(spec, grid, resample), GenerationError);

  GenerateOptions repair;
  repair.policy = ConnectivityPolicy::resample_then_repair;
  repair.repair_after = 0;
  repair.max_attempts = 10;
  auto r = generate_connected(spec, grid, repair);
  CHECK(is_connected(r.graph));
  CHECK(r.repaired);
  CHECK(r.graph.node_count() == 16);
  CHECK(r.graph.edge_count() == 2 * 28);  // rewiring preserves the edge count

  // deterministic: repairing the same spec twice gives the same graph
  auto r2 = generate_connected(spec, grid, repair);
  CHECK(r.graph.edges() == r2.graph.edges());
}

TEST_CASE("repair_connect fails honestly when there is no cycle to open") {
  // Two disjoint paths form a forest: every edge is a bridge.
  Graph g(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  Rng rng(5);
  CHECK_FALSE(repair_connect(g, rng));
}

TEST_CASE("density enforcement rejects off-target draws") {
  ClassGrid grid;
  GraphSpec spec;
  spec.id = "off_target";
  spec.params.generator = Generator::GNM;
  spec.params.target_n = 20;
  spec.params.gnm_m = 40;                      // density 2.0, always
  spec.params.target_linear_density = 1.0;     // claimed target is far away
  spec.seed = 3;

  GenerateOptions opts;
  opts.max_attempts = 5;
  opts.enforce_density = true;
  CHECK_THROWS_AS(generate_connected(spec, grid, opts), GenerationError);

  opts.enforce_density = false;
  CHECK(generate_connected(spec, grid, opts).graph.edge_count() == 40);
}
