#ifndef WAVPERS_EXPERIMENT_HPP
#define WAVPERS_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wavpers/cache.hpp"
#include "wavpers/config.hpp"
#include "wavpers/graph.hpp"
#include "wavpers/model.hpp"

namespace wavpers {

/// Outcome of one train/test split.
struct FoldResult {
    std::uint64_t partition_seed = 0;
    int fold = 0;
    double test_accuracy = 0.0;       // at the recorded epoch, eval mode
    double final_train_loss = 0.0;    // last trained epoch
    std::vector<double> train_loss_curve; // one entry per epoch
    std::vector<double> test_acc_curve;
    int nongeneric_forwards = 0;
};

/// Ten ten-fold means plus their grand mean and sample standard deviation.
struct ResultSheet {
    std::vector<double> tenfold_means;
    double grand_mean = 0.0;
    double std_dev = 0.0;
};

struct ExperimentOutput {
    std::vector<FoldResult> folds; // 10 seeds x 10 folds, seed-major
    ResultSheet sheet;
};

/// Inputs for training, derived from the cache and the feature mode.
PipelineInputs make_pipeline_inputs(const Dataset& d, const PrecomputedData& pre,
                                    bool with_features);

/// One train/test split: mini-batch training with per-epoch loss and test
/// accuracy curves; the reported accuracy is snapshotted after
/// record_epoch completed epochs while training continues to `epochs`.
FoldResult run_fold(const PipelineInputs& inputs, const TrainSettings& settings,
                    const std::vector<int>& train_ids, const std::vector<int>& test_ids,
                    int epochs, int record_epoch, int batch_size, std::uint64_t job_seed);

/// The full 10 x 10 protocol over a work queue of independent fold jobs.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, const Dataset& d,
                                const PrecomputedData& pre);

ResultSheet summarise(const std::vector<FoldResult>& folds);

/// results.csv, summary.csv and loss_curve_<seed>_<fold>.csv under out_dir.
void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out);

/// Singular-value spreads and sampled reconditioned basis functions as CSV
/// (and small SVG plots) under out_dir.
void emit_diagnostics(const PrecomputedData& pre, const std::string& out_dir);

/// Deterministic per-job seed from the training seed, partition seed and
/// fold index.
std::uint64_t fold_job_seed(std::uint64_t train_seed, std::uint64_t partition_seed, int fold);

} // namespace wavpers

#endif // WAVPERS_EXPERIMENT_HPP
