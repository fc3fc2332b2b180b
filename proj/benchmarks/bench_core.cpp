// Microbenchmarks for the pipeline's hot paths: generation, canonical
// labeling, feature extraction, the pairwise measures, layout, and
// rasterization. Graph sizes follow the corpus size classes.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "graphsim/canonical.hpp"
#include "graphsim/features.hpp"
#include "graphsim/generators.hpp"
#include "graphsim/graph.hpp"
#include "graphsim/layout.hpp"
#include "graphsim/render.hpp"
#include "graphsim/rng.hpp"
#include "graphsim/similarity.hpp"

namespace {

using namespace graphsim;

Graph corpus_like_graph(int n, std::uint64_t seed) {
  return gen_gnm(n, 2LL * n, seed);
}

void BM_GenGnm(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    Graph g = gen_gnm(n, 2LL * n, seed++);
    benchmark::DoNotOptimize(g.edge_count());
  }
}
BENCHMARK(BM_GenGnm)->Arg(25)->Arg(100)->Arg(250);

void BM_GenBba(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    Graph g = gen_bba(n, 2, seed++);
    benchmark::DoNotOptimize(g.edge_count());
  }
}
BENCHMARK(BM_GenBba)->Arg(25)->Arg(100)->Arg(250);

void BM_CanonicalHash(benchmark::State& state) {
  Graph g = corpus_like_graph(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(canonical_hash(g));
}
BENCHMARK(BM_CanonicalHash)->Arg(25)->Arg(100)->Arg(250);

void BM_Betweenness(benchmark::State& state) {
  Graph g = corpus_like_graph(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(betweenness(g));
}
BENCHMARK(BM_Betweenness)->Arg(25)->Arg(100)->Arg(250);

void BM_Louvain(benchmark::State& state) {
  Graph g = corpus_like_graph(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(louvain(g, 7).community_count);
}
BENCHMARK(BM_Louvain)->Arg(25)->Arg(100)->Arg(250);

void BM_ComputeFeatures(benchmark::State& state) {
  Graph g = corpus_like_graph(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(compute_features(g).modularity);
}
BENCHMARK(BM_ComputeFeatures)->Arg(25)->Arg(100)->Arg(250);

void BM_Jsd(benchmark::State& state) {
  int len = static_cast<int>(state.range(0));
  Rng rng(3);
  std::vector<double> p(len), q(len);
  double sp = 0, sq = 0;
  for (int i = 0; i < len; ++i) {
    p[i] = rng.next_double() + 1e-3;
    q[i] = rng.next_double() + 1e-3;
    sp += p[i];
    sq += q[i];
  }
  for (int i = 0; i < len; ++i) {
    p[i] /= sp;
    q[i] /= sq;
  }
  for (auto _ : state) benchmark::DoNotOptimize(jsd(p, q));
}
BENCHMARK(BM_Jsd)->Arg(20)->Arg(200);

void BM_SimilarityVector(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  FeatureProfile a = compute_features(corpus_like_graph(n, 7));
  FeatureProfile b = compute_features(corpus_like_graph(n, 8));
  for (auto _ : state) benchmark::DoNotOptimize(similarity_vector(a, b).mean());
}
BENCHMARK(BM_SimilarityVector)->Arg(25)->Arg(250);

void BM_FrLayout(benchmark::State& state) {
  Graph g = corpus_like_graph(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(fr_layout(g, 100, 7).energy_final);
}
BENCHMARK(BM_FrLayout)->Arg(25)->Arg(100)->Arg(250);

void BM_RenderPng(benchmark::State& state) {
  Graph g = corpus_like_graph(static_cast<int>(state.range(0)), 7);
  Layout layout = fr_layout(g, 100, 7);
  for (auto _ : state) benchmark::DoNotOptimize(render_png(g, layout).size());
}
BENCHMARK(BM_RenderPng)->Arg(25)->Arg(250);

}  // namespace

BENCHMARK_MAIN();
