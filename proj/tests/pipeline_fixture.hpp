#ifndef WAVPERS_TESTS_PIPELINE_FIXTURE_HPP
#define WAVPERS_TESTS_PIPELINE_FIXTURE_HPP

#include <memory>

#include "test_util.hpp"
#include "wavpers/cache.hpp"
#include "wavpers/experiment.hpp"
#include "wavpers/model.hpp"
#include "wavpers/wavelet_basis.hpp"

namespace wavpers::testing {

/// Synthetic two-class dataset plus everything the classifier needs.
/// Class 0 graphs are trees (paths with a pendant), class 1 graphs carry
/// cycles, so persistence features separate the classes.
struct PipelineFixture {
    Dataset dataset;
    PrecomputedData pre;
    PipelineInputs inputs; // points into dataset/pre

    PipelineFixture(const PipelineFixture&) = delete;
    PipelineFixture& operator=(const PipelineFixture&) = delete;

    explicit PipelineFixture(int n_per_class = 8, std::uint64_t seed = 99,
                             bool with_features = true) {
        Rng rng(seed);
        dataset.name = "SYNTH";
        for (int i = 0; i < n_per_class; ++i) {
            const int n = 5 + static_cast<int>(rng.uniform_index(3));
            Graph tree = path_graph(n);
            dataset.graphs.push_back(tree);
            dataset.labels.push_back(0);

            Graph cyclic = cycle_graph(n);
            cyclic.edges.emplace_back(0, n / 2); // a chord for a second loop
            dataset.graphs.push_back(cyclic);
            dataset.labels.push_back(1);
        }
        pre = precompute(dataset, rbf_basis());
        inputs = make_pipeline_inputs(dataset, pre, with_features);
    }
};

} // namespace wavpers::testing

#endif // WAVPERS_TESTS_PIPELINE_FIXTURE_HPP
