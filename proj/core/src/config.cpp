#include "wavpers/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include <json.hpp>

#include "wavpers/errors.hpp"

namespace wavpers {

namespace {

std::string upper(const std::string& s) {
    std::string u = s;
    std::transform(u.begin(), u.end(), u.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    return u;
}

bool is_imdb(const std::string& dataset) { return upper(dataset).rfind("IMDB", 0) == 0; }

} // namespace

int default_batch_size(const std::string& dataset, bool* is_fallback) {
    static const std::map<std::string, int> table = {
        {"MUTAG", 10}, {"COX2", 9}, {"DHFR", 11}, {"NCI1", 20}, {"IMDB-B", 50},
        {"IMDB-BINARY", 50},
    };
    if (is_fallback) *is_fallback = false;
    const auto it = table.find(upper(dataset));
    if (it != table.end()) return it->second;
    if (is_fallback) *is_fallback = true;
    return 20; // PROTEINS and anything unlisted
}

int default_record_epoch(const std::string& dataset, bool wavelet_opt, bool with_features) {
    struct Row {
        int po_control, po_opt, np_control, np_opt;
    };
    static const std::map<std::string, Row> table = {
        {"MUTAG", {25, 125, 25, 75}},    {"COX2", {50, 50, 25, 25}},
        {"DHFR", {125, 250, 125, 45}},   {"NCI1", {270, 270, 500, 370}},
        {"PROTEINS", {50, 50, 125, 125}}, {"IMDB-B", {100, 25, 75, 50}},
        {"IMDB-BINARY", {100, 25, 75, 50}},
    };
    const auto it = table.find(upper(dataset));
    if (it == table.end()) return 50;
    const Row& r = it->second;
    if (with_features) return wavelet_opt ? r.np_opt : r.np_control;
    return wavelet_opt ? r.po_opt : r.po_control;
}

double default_wavelet_lr(const std::string& dataset) { return is_imdb(dataset) ? 1e-1 : 1e-2; }

void ExperimentConfig::validate() const {
    if (basis != "rbf" && basis != "chebyshev")
        throw config_error("basis must be rbf or chebyshev, got \"" + basis + "\"");
    if (mode != "wavelet-opt" && mode != "control")
        throw config_error("mode must be wavelet-opt or control, got \"" + mode + "\"");
    if (features != "persistence-only" && features != "with-nonpersistence")
        throw config_error("features must be persistence-only or with-nonpersistence");
    if (fold_seeds.size() != 10)
        throw config_error("fold_seeds must list exactly 10 partition seeds");
    if (batch_size == 0 || batch_size < -1) throw config_error("batch_size must be positive");
    if (chebyshev_m < 1) throw config_error("chebyshev_m must be at least 1");
}

void ExperimentConfig::resolve_defaults() {
    validate();
    if (batch_size < 0) batch_size = default_batch_size(dataset, &batch_size_is_fallback);
    if (record_epoch < 0)
        record_epoch = default_record_epoch(dataset, !control_mode(), with_features());
    if (record_epoch < 1) throw config_error("record_epoch must be at least 1");
    if (epochs < 0) epochs = record_epoch;
    if (epochs < record_epoch)
        throw config_error("epochs is smaller than record_epoch");
    if (wavelet_lr < 0.0) wavelet_lr = default_wavelet_lr(dataset);
    if (out_dir.empty()) out_dir = "runs/" + dataset;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error("config parse error in " + path + ": " + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (j.contains("dataset")) cfg.dataset = j["dataset"].get<std::string>();
        if (j.contains("data_root")) cfg.data_root = j["data_root"].get<std::string>();
        if (j.contains("basis")) cfg.basis = j["basis"].get<std::string>();
        if (j.contains("chebyshev_m")) cfg.chebyshev_m = j["chebyshev_m"].get<int>();
        if (j.contains("mode")) cfg.mode = j["mode"].get<std::string>();
        if (j.contains("features")) cfg.features = j["features"].get<std::string>();
        if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<int>();
        if (j.contains("epochs")) cfg.epochs = j["epochs"].get<int>();
        if (j.contains("record_epoch")) cfg.record_epoch = j["record_epoch"].get<int>();
        if (j.contains("nn_lr")) cfg.nn_lr = j["nn_lr"].get<double>();
        if (j.contains("wavelet_lr")) cfg.wavelet_lr = j["wavelet_lr"].get<double>();
        if (j.contains("freeze_epoch")) cfg.freeze_epoch = j["freeze_epoch"].get<int>();
        if (j.contains("fold_seeds"))
            cfg.fold_seeds = j["fold_seeds"].get<std::vector<std::uint64_t>>();
        if (j.contains("train_seed")) cfg.train_seed = j["train_seed"].get<std::uint64_t>();
        if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
        if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error("config field error in " + path + ": " + e.what());
    }
    return cfg;
}

} // namespace wavpers
