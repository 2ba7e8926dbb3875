#include <benchmark/benchmark.h>

#include "pipeline_fixture.hpp"
#include "wavpers/model.hpp"

using namespace wavpers;

static void BM_TrainBatch(benchmark::State& state) {
    static testing::PipelineFixture fx(8, 77);
    TrainSettings settings;
    GraphClassifier model(fx.inputs, settings, 7);
    std::vector<int> batch;
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i) batch.push_back(i);
    int epoch = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.train_batch(batch));
        model.step(epoch++ % 40);
    }
}
BENCHMARK(BM_TrainBatch)->Arg(4)->Arg(10);

static void BM_Predict(benchmark::State& state) {
    static testing::PipelineFixture fx(8, 78);
    TrainSettings settings;
    GraphClassifier model(fx.inputs, settings, 8);
    std::vector<int> ids;
    for (int i = 0; i < fx.dataset.size(); ++i) ids.push_back(i);
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.predict(ids));
    }
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMillisecond);
