#include <benchmark/benchmark.h>

#include "test_util.hpp"
#include "wavpers/persistence.hpp"
#include "wavpers/vectorize.hpp"

using namespace wavpers;

static void BM_ExtendedPersistence(benchmark::State& state) {
    Rng rng(4);
    const int n = static_cast<int>(state.range(0));
    const Graph g = testing::random_connected_graph(n, 0.08, rng);
    const Eigen::VectorXd f = testing::random_function(n, rng);
    for (auto _ : state) {
        ExtendedDiagram d = extended_persistence(g, f);
        benchmark::DoNotOptimize(d.ext0.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_ExtendedPersistence)->RangeMultiplier(2)->Range(8, 256)->Complexity();

static void BM_DiagramImage(benchmark::State& state) {
    Rng rng(5);
    const int n = static_cast<int>(state.range(0));
    const Graph g = testing::random_connected_graph(n, 0.15, rng);
    const Eigen::VectorXd f = testing::random_function(n, rng);
    const ExtendedDiagram d = extended_persistence(g, f);
    const AffineRescale r{0.5, 0.5};
    const ImageSpec spec;
    for (auto _ : state) {
        DiagramImage img(d, r, spec);
        benchmark::DoNotOptimize(img.pixels().data());
    }
}
BENCHMARK(BM_DiagramImage)->Arg(16)->Arg(64)->Arg(128);

static void BM_DiagramImageBackward(benchmark::State& state) {
    Rng rng(6);
    const int n = static_cast<int>(state.range(0));
    const Graph g = testing::random_connected_graph(n, 0.15, rng);
    const Eigen::VectorXd f = testing::random_function(n, rng);
    const ExtendedDiagram d = extended_persistence(g, f);
    const ImageSpec spec;
    const DiagramImage img(d, AffineRescale{0.5, 0.5}, spec);
    std::vector<double> up(3 * spec.n_pixels(), 1.0);
    for (auto _ : state) {
        DiagramCotangent ct = img.backward(up);
        benchmark::DoNotOptimize(ct.ext0.data());
    }
}
BENCHMARK(BM_DiagramImageBackward)->Arg(16)->Arg(64);
