#include <benchmark/benchmark.h>

#include "test_util.hpp"
#include "wavpers/parametrisation.hpp"
#include "wavpers/spectral.hpp"
#include "wavpers/wavelet_basis.hpp"

using namespace wavpers;

static void BM_Eigendecompose(benchmark::State& state) {
    Rng rng(1);
    const Graph g = testing::random_connected_graph(static_cast<int>(state.range(0)), 0.1, rng);
    const Eigen::MatrixXd l = normalised_laplacian(g);
    for (auto _ : state) {
        SpectralData s = eigendecompose(l);
        benchmark::DoNotOptimize(s.eigenvalues.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigendecompose)->RangeMultiplier(2)->Range(16, 256)->Complexity();

static void BM_WaveletSignature(benchmark::State& state) {
    Rng rng(2);
    const Graph g = testing::random_connected_graph(static_cast<int>(state.range(0)), 0.1, rng);
    const SpectralData s = eigendecompose(normalised_laplacian(g));
    for (auto _ : state) {
        Eigen::VectorXd w = heat_kernel_signature(s, 10.0);
        benchmark::DoNotOptimize(w.data());
    }
}
BENCHMARK(BM_WaveletSignature)->RangeMultiplier(2)->Range(16, 256);

static void BM_BuildParametrisation(benchmark::State& state) {
    Rng rng(3);
    Dataset d;
    d.name = "BENCH";
    std::vector<SpectralData> spectra;
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
        d.graphs.push_back(testing::random_connected_graph(16, 0.15, rng));
        d.labels.push_back(i % 2);
        spectra.push_back(eigendecompose(normalised_laplacian(d.graphs.back())));
    }
    const WaveletBasis basis = rbf_basis();
    for (auto _ : state) {
        Parametrisation p = build_parametrisation(d, spectra, basis);
        benchmark::DoNotOptimize(p.singular_values.data());
    }
}
BENCHMARK(BM_BuildParametrisation)->Arg(32)->Arg(128);
