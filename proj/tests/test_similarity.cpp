#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "graphsim/errors.hpp"
#include "graphsim/features.hpp"
#include "graphsim/generators.hpp"
#include "graphsim/graph.hpp"
#include "graphsim/rng.hpp"
#include "graphsim/similarity.hpp"
#include "support/oracles.hpp"

using namespace graphsim;
using namespace graphsim::testing;

TEST_CASE("jsd endpoints and symmetry") {
  std::vector<double> p{0.5, 0.5};
  std::vector<double> q{1.0, 0.0};
  CHECK(jsd(p, p) == doctest::Approx(0.0));
  CHECK(jsd(q, q) == doctest::Approx(0.0));
  // disjoint supports reach the base-2 maximum of exactly 1
  CHECK(jsd({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(jsd(p, q) == doctest::Approx(jsd(q, p)).epsilon(1e-15));
  // frozen reference value for the half-half vs point-mass pair
  CHECK(jsd(p, q) == doctest::Approx(0.3112781244591328).epsilon(1e-12));
}

TEST_CASE("jsd agrees with the long-double reference on random distributions") {
  Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    int len = 2 + static_cast<int>(rng.below(12));
    auto p = random_distribution(rng, len);
    auto q = random_distribution(rng, len);
    double got = jsd(p, q);
    double want = jsd_reference(p, q);
    CAPTURE(trial);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("sqrt of jsd satisfies the triangle inequality") {
  Rng rng(321);
  for (int trial = 0; trial < 300; ++trial) {
    int len = 2 + static_cast<int>(rng.below(8));
    auto p = random_distribution(rng, len);
    auto q = random_distribution(rng, len);
    auto r = random_distribution(rng, len);
    double pq = std::sqrt(jsd(p, q));
    double qr = std::sqrt(jsd(q, r));
    double pr = std::sqrt(jsd(p, r));
    CAPTURE(trial);
    CHECK(pr <= pq + qr + 1e-9);
  }
}

TEST_CASE("jsd rejects malformed inputs") {
  CHECK_THROWS_AS(jsd({0.5, 0.5}, {1.0}), MeasureError);
  CHECK_THROWS_AS(jsd({0.5, 0.6}, {0.5, 0.5}), MeasureError);   // sums to 1.1
  CHECK_THROWS_AS(jsd({-0.1, 1.1}, {0.5, 0.5}), MeasureError);  // negative mass
  CHECK_THROWS_AS(validate_prob({0.5, 0.4}), MeasureError);
  CHECK_NOTHROW(validate_prob({0.25, 0.75}));
}

TEST_CASE("binning snaps boundary values into stable bins") {
  // 20 bins of width 0.05: 0.15 sits on the 2/3 boundary and must land in
  // bin 3 (left-closed), while exactly 1.0 stays in the final closed bin.
  auto h = bin_unit_values({0.15, 1.0, 0.0, 0.999}, 20);
  REQUIRE(h.size() == 20);
  CHECK(h[3] == doctest::Approx(0.25));
  CHECK(h[2] == doctest::Approx(0.0));
  CHECK(h[0] == doctest::Approx(0.25));
  CHECK(h[19] == doctest::Approx(0.5));
  CHECK(std::accumulate(h.begin(), h.end(), 0.0) == doctest::Approx(1.0));

  // representation noise just below a boundary snaps up
  auto g = bin_unit_values({0.15 - 1e-13}, 20);
  CHECK(g[3] == doctest::Approx(1.0));

  CHECK_THROWS_AS(bin_unit_values({0.5}, 0), MeasureError);
  CHECK_THROWS_AS(bin_unit_values({1.5}, 20), MeasureError);
  CHECK_THROWS_AS(bin_unit_values({-0.5}, 20), MeasureError);
}

namespace {

FeatureProfile profile_of(const Graph& g) { return compute_features(g); }

}  // namespace

TEST_CASE("size and density measures follow their closed forms") {
  FeatureProfile a = profile_of(gen_gnm(10, 20, 1));
  FeatureProfile b = profile_of(gen_gnm(40, 50, 2));
  CHECK(sim_size(a, b) == doctest::Approx(1.0 - 30.0 / 40.0));
  CHECK(sim_size(a, a) == doctest::Approx(1.0));
  // densities 2.0 and 1.25: 1 - 0.75/2.0
  CHECK(sim_density(a, b) == doctest::Approx(1.0 - 0.75 / 2.0));
  CHECK(sim_density(b, a) == doctest::Approx(sim_density(a, b)));
}

TEST_CASE("density of two edgeless graphs is undefined") {
  FeatureProfile a = profile_of(Graph(3, {}));
  FeatureProfile b = profile_of(Graph(5, {}));
  CHECK_THROWS_AS(sim_density(a, b), MeasureError);
  // one-sided zero is fine: 1 - |0 - d|/d = 0
  FeatureProfile c = profile_of(gen_gnm(5, 5, 1));
  CHECK(sim_density(a, c) == doctest::Approx(0.0));
}

TEST_CASE("degree measure zero-pads to the union support") {
  // path vs star on 4 nodes: degree dists [0, .5, .5] and [0, .75, 0, .25]
  FeatureProfile path = profile_of(Graph(4, {{0, 1}, {1, 2}, {2, 3}}));
  FeatureProfile star = profile_of(Graph(4, {{0, 1}, {0, 2}, {0, 3}}));
  double expect = 1.0 - jsd_reference({0.0, 0.5, 0.5, 0.0}, {0.0, 0.75, 0.0, 0.25});
  CHECK(sim_degree(path, star) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(sim_degree(star, path) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(sim_degree(path, path) == doctest::Approx(1.0));
}

TEST_CASE("clustering measure reproduces the frozen example") {
  // K4 (all coefficients 1) vs K4 minus an edge (two 1s, two 1/3s):
  // binned at 20, the divergence is that of [.5,.5] vs [1,0] splits.
  FeatureProfile k4 = profile_of(gen_gnm(4, 6, 1));
  FeatureProfile k4e = profile_of(Graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}));
  CHECK(sim_clustering(k4e, k4) == doctest::Approx(0.6887218755408672).epsilon(1e-12));
  CHECK(sim_clustering(k4, k4) == doctest::Approx(1.0));
}

TEST_CASE("betweenness measure reproduces the frozen examples") {
  Graph tri(3, {{0, 1}, {1, 2}, {0, 2}});
  Graph claw(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(sim_betweenness(profile_of(tri), profile_of(claw)) ==
        doctest::Approx(0.8620746190299701).epsilon(1e-12));

  std::vector<Edge> star_edges, path_edges;
  for (int i = 1; i < 10; ++i) star_edges.emplace_back(0, i);
  for (int i = 0; i + 1 < 10; ++i) path_edges.emplace_back(i, i + 1);
  CHECK(sim_betweenness(profile_of(Graph(10, std::move(star_edges))),
                        profile_of(Graph(10, std::move(path_edges)))) ==
        doctest::Approx(0.3762211396014730).epsilon(1e-12));
}

TEST_CASE("community measure compares padded sorted size vectors") {
  // (50,50) vs (25,25,25,25) as relative sizes
  FeatureProfile a;
  a.node_count = 100;
  a.community_sizes = {0.5, 0.5};
  FeatureProfile b;
  b.node_count = 100;
  b.community_sizes = {0.25, 0.25, 0.25, 0.25};
  CHECK(sim_community(a, b) == doctest::Approx(0.6887218755408672).epsilon(1e-12));
  CHECK(sim_community(b, a) == doctest::Approx(sim_community(a, b)));
  CHECK(sim_community(a, a) == doctest::Approx(1.0));
}

TEST_CASE("measure bins option changes the histogram resolution") {
  Rng rng(8);
  Graph g1 = random_connected_graph(rng, 10, 14);
  Graph g2 = random_connected_graph(rng, 10, 14);
  FeatureProfile a = profile_of(g1), b = profile_of(g2);
  MeasureOptions coarse;
  coarse.bins = 2;
  // with 2 bins nearly all mass lands together; the measure should not drop
  // below the 20-bin value
  CHECK(sim_clustering(a, b, coarse) >= sim_clustering(a, b) - 1e-12);
}

TEST_CASE("all six measures are symmetric, bounded, and 1 on identical graphs") {
  Rng rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g1 = random_connected_graph(rng, 4, 16);
    Graph g2 = random_connected_graph(rng, 4, 16);
    FeatureProfile a = profile_of(g1), b = profile_of(g2);

    SimilarityVector ab = similarity_vector(a, b);
    SimilarityVector ba = similarity_vector(b, a);
    for (std::size_t k = 0; k < 6; ++k) {
      CAPTURE(trial);
      CAPTURE(kMeasureNames[k]);
      CHECK(ab.as_array()[k] >= 0.0);
      CHECK(ab.as_array()[k] <= 1.0);
      CHECK(ab.as_array()[k] == doctest::Approx(ba.as_array()[k]).epsilon(1e-12));
    }

    SimilarityVector self = similarity_vector(a, a);
    for (double v : self.as_array()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("measures are invariant under relabeling") {
  Rng rng(77);
  Graph g = gen_sbm({6, 6}, 0.9, 0.1, 4);
  Graph h = gen_bba(12, 2, 9);
  SimilarityVector base = similarity_vector(g, h);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> perm;
    Graph gp = shuffled(g, rng, &perm);
    SimilarityVector v = similarity_vector(gp, h);
    for (std::size_t k = 0; k < 6; ++k)
      CHECK(v.as_array()[k] == doctest::Approx(base.as_array()[k]).epsilon(1e-12));
    // a graph and its relabeling are indistinguishable
    SimilarityVector self = similarity_vector(g, gp);
    for (double s : self.as_array()) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("similarity vector mean matches the array") {
  SimilarityVector v{1.0, 0.5, 0.25, 0.75, 0.0, 0.5};
  CHECK(v.mean() == doctest::Approx(3.0 / 6.0));
  auto arr = v.as_array();
  CHECK(arr[0] == 1.0);
  CHECK(arr[5] == 0.5);
}
