#include <doctest.h>

#include <algorithm>

#include "graphsim/graph.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace graphsim;
namespace gt = graphsim::testing;

TEST_CASE("construction normalizes and validates") {
  Graph g(4, {{2, 0}, {1, 0}, {3, 2}});
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 3);
  // edges stored (u,v) with u < v, sorted
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 2}, {2, 3}});
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(1, 3));
  CHECK(g.degree(0) == 2);
  CHECK(g.neighbors(2) == std::vector<int>{0, 3});
  CHECK(g.linear_density() == doctest::Approx(0.75));

  CHECK_THROWS_AS(Graph(3, {{0, 0}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, -1}}), GraphError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), GraphError);  // duplicate after orientation
  CHECK_THROWS_AS(Graph(-1, {}), GraphError);
}

TEST_CASE("connectivity") {
  CHECK(is_connected(Graph(1, {})));
  CHECK(is_connected(Graph(4, {{0, 1}, {1, 2}, {2, 3}})));
  CHECK_FALSE(is_connected(Graph(4, {{0, 1}, {2, 3}})));
  CHECK_FALSE(is_connected(Graph(2, {})));
}

TEST_CASE("permuted relabels edges") {
  Graph g(4, {{0, 1}, {1, 2}, {2, 3}});
  Graph p = permuted(g, {3, 2, 1, 0});
  CHECK(p.edges() == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  Graph q = permuted(g, {1, 0, 3, 2});
  CHECK(q.edges() == std::vector<Edge>{{0, 1}, {0, 3}, {2, 3}});
}

TEST_CASE("edge_list_hash keyed by labeled structure") {
  Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
  Graph same(4, {{2, 3}, {0, 1}, {1, 2}});
  Graph other(4, {{0, 1}, {1, 2}, {1, 3}});
  CHECK(edge_list_hash(path) == edge_list_hash(same));
  CHECK(edge_list_hash(path) != edge_list_hash(other));
}

TEST_CASE("graph file round-trip") {
  gt::TempDir dir("graph-io");
  Graph g(5, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {2, 3}}, "gnm_s1_d1_i00");
  GraphFileMeta meta;
  meta.id = "gnm_s1_d1_i00";
  meta.generator = Generator::GNM;
  meta.size_class = "S1";
  meta.density_class = "D1";
  meta.seed = 0xdeadbeefcafe1234ULL;

  auto path = dir.path() / "g.json";
  save_graph(g, meta, path);
  LoadedGraph back = load_graph(path);
  CHECK(back.graph.node_count() == 5);
  CHECK(back.graph.edges() == g.edges());
  CHECK(back.meta.id == meta.id);
  CHECK(back.meta.generator == Generator::GNM);
  CHECK(back.meta.size_class == "S1");
  CHECK(back.meta.density_class == "D1");
  CHECK(back.meta.seed == meta.seed);

  // serialization is byte-stable
  CHECK(graph_file_text(g, meta) == graph_file_text(g, meta));
}

TEST_CASE("graph file parse failures") {
  CHECK_THROWS_AS(parse_graph_file("not json"), GraphError);
  CHECK_THROWS_AS(parse_graph_file("{}"), GraphError);
  // well-formed envelope, invalid structure: validation still applies on load
  CHECK_THROWS_AS(
      parse_graph_file(R"({"id":"x","generator":"GNM","size_class":"S1",)"
                       R"("density_class":"D1","seed":0,"n":2,"edges":[[0,0]]})"),
      GraphError);
}

TEST_CASE("generator names round-trip") {
  for (Generator g :
       {Generator::GNM, Generator::BBA, Generator::NWS, Generator::SBM})
    CHECK(generator_from_string(to_string(g)) == g);
  CHECK_THROWS(generator_from_string("erdos"));
}

TEST_CASE("degree_sequence matches adjacency") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = gt::random_graph(rng, 2, 12);
    auto seq = degree_sequence(g);
    REQUIRE(static_cast<int>(seq.size()) == g.node_count());
    int sum = 0;
    for (int v = 0; v < g.node_count(); ++v) {
      CHECK(seq[static_cast<std::size_t>(v)] == g.degree(v));
      sum += seq[static_cast<std::size_t>(v)];
    }
    CHECK(sum == 2 * g.edge_count());
  }
}
