#ifndef WAVPERS_CONFIG_HPP
#define WAVPERS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace wavpers {

/// One experiment: dataset, basis, training mode, feature mode, schedule
/// and seeds. Negative numeric fields mean "use the per-dataset default";
/// resolve_defaults() fills them in.
struct ExperimentConfig {
    std::string dataset = "MUTAG";
    std::string data_root = "data";
    std::string basis = "rbf"; // rbf | chebyshev
    int chebyshev_m = 13;
    std::string mode = "wavelet-opt";             // wavelet-opt | control
    std::string features = "with-nonpersistence"; // persistence-only | with-nonpersistence

    int batch_size = -1;
    int epochs = -1;       // defaults to record_epoch
    int record_epoch = -1; // accuracy snapshot, counted in completed epochs
    double nn_lr = 1e-3;
    double wavelet_lr = -1.0; // 1e-2, 1e-1 for IMDB*
    int freeze_epoch = 50;    // wavelet updates stop after this many epochs

    std::vector<std::uint64_t> fold_seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::uint64_t train_seed = 7;

    int workers = 0; // 0 = hardware concurrency
    std::string out_dir;

    bool control_mode() const { return mode == "control"; }
    bool with_features() const { return features == "with-nonpersistence"; }

    /// True when the batch size came from a table entry rather than a
    /// published value (currently only PROTEINS).
    bool batch_size_is_fallback = false;

    void validate() const;
    void resolve_defaults();
};

/// JSON file with keys mirroring the field names above; missing keys keep
/// defaults.
ExperimentConfig load_config(const std::string& path);

/// Per-dataset defaults.
int default_batch_size(const std::string& dataset, bool* is_fallback = nullptr);
int default_record_epoch(const std::string& dataset, bool wavelet_opt, bool with_features);
double default_wavelet_lr(const std::string& dataset);

} // namespace wavpers

#endif // WAVPERS_CONFIG_HPP
