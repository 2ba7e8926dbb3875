#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "wavpers/cache.hpp"
#include "wavpers/config.hpp"
#include "wavpers/errors.hpp"
#include "wavpers/experiment.hpp"
#include "wavpers/tudataset.hpp"
#include "wavpers/wavelet_basis.hpp"

namespace fs = std::filesystem;
using namespace wavpers;

namespace {

WaveletBasis basis_from(const ExperimentConfig& cfg) {
    if (cfg.basis == "rbf") return rbf_basis();
    return chebyshev_basis(cfg.chebyshev_m);
}

PrecomputedData load_or_precompute(const ExperimentConfig& cfg, const Dataset& d,
                                   const std::string& cache_dir) {
    if (!cache_dir.empty()) {
        const std::string path = cache_path(cache_dir, cfg.dataset, cfg.basis);
        if (fs::exists(path)) {
            std::cerr << "using cache " << path << "\n";
            return load_cache(path);
        }
    }
    std::cerr << "precomputing spectral data for " << cfg.dataset << " (" << cfg.basis
              << ")...\n";
    PrecomputedData pre = precompute(d, basis_from(cfg));
    if (!cache_dir.empty()) {
        fs::create_directories(cache_dir);
        const std::string path = cache_path(cache_dir, cfg.dataset, cfg.basis);
        save_cache(pre, path);
        std::cerr << "cached to " << path << "\n";
    }
    return pre;
}

int cmd_ingest(const std::string& data_root, const std::string& dataset,
               const std::string& resave_dir) {
    const Dataset d = load_tudataset(data_root, dataset);
    int vertices = 0, edges = 0, components = 0;
    std::map<int, int> label_counts;
    for (const auto& g : d.graphs) {
        vertices += g.n_vertices;
        edges += g.n_edges();
        components += g.n_components();
    }
    for (int label : d.labels) ++label_counts[label];

    std::cout << "dataset " << d.name << "\n"
              << "  graphs:           " << d.size() << "\n"
              << "  vertices:         " << vertices << "\n"
              << "  undirected edges: " << edges << "\n"
              << "  components:       " << components << "\n"
              << "  labels:           0 x " << label_counts[0] << ", 1 x " << label_counts[1]
              << "\n"
              << "  self-loops dropped:        " << d.load_stats.self_loops_dropped << "\n"
              << "  duplicate edges collapsed: " << d.load_stats.duplicate_edges_collapsed
              << "\n";
    if (!resave_dir.empty()) {
        save_tudataset(d, resave_dir);
        std::cout << "rewritten under " << resave_dir << "/" << d.name << "\n";
    }
    return 0;
}

int cmd_report(const std::string& out_dir) {
    const fs::path path = fs::path(out_dir) / "results.csv";
    std::ifstream in(path);
    if (!in) throw data_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line); // header
    std::vector<FoldResult> folds;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        FoldResult r;
        std::getline(ss, cell, ',');
        r.partition_seed = std::stoull(cell);
        std::getline(ss, cell, ',');
        r.fold = std::stoi(cell);
        std::getline(ss, cell, ',');
        r.test_accuracy = std::stod(cell);
        if (std::getline(ss, cell, ',')) r.final_train_loss = std::stod(cell);
        folds.push_back(r);
    }
    if (folds.empty()) throw data_error(path.string() + " contains no fold rows");
    const ResultSheet sheet = summarise(folds);

    std::cout << "fold experiments: " << folds.size() << "\n";
    for (std::size_t i = 0; i < sheet.tenfold_means.size(); ++i)
        std::cout << "  ten-fold " << i << ": mean accuracy " << sheet.tenfold_means[i] << "\n";
    std::cout << "grand mean: " << sheet.grand_mean << "\n"
              << "std dev:    " << sheet.std_dev << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral wavelet persistence graph classification"};
    app.require_subcommand(1);

    std::string config_path;
    ExperimentConfig cfg; // flags parse into here
    std::string cache_dir = "cache";
    std::string resave_dir;
    std::string report_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--data-root", cfg.data_root, "directory with TUDataset folders");
        sub->add_option("--dataset", cfg.dataset, "dataset name");
        sub->add_option("--basis", cfg.basis, "rbf | chebyshev");
        sub->add_option("--chebyshev-m", cfg.chebyshev_m, "number of Chebyshev functions");
        sub->add_option("--cache-dir", cache_dir, "sidecar cache directory ('' disables)");
    };

    CLI::App* ingest = app.add_subcommand("ingest", "load and validate a dataset");
    add_common(ingest);
    ingest->add_option("--resave", resave_dir, "rewrite the dataset in canonical form here");

    CLI::App* precompute_cmd =
        app.add_subcommand("precompute", "eigendata, parametrisation, features, static images");
    add_common(precompute_cmd);

    CLI::App* train = app.add_subcommand("train", "run the 10x10 fold protocol");
    add_common(train);
    train->add_option("--mode", cfg.mode, "wavelet-opt | control");
    train->add_option("--features", cfg.features, "persistence-only | with-nonpersistence");
    train->add_option("--batch-size", cfg.batch_size, "mini-batch size");
    train->add_option("--epochs", cfg.epochs, "training epochs");
    train->add_option("--record-epoch", cfg.record_epoch, "epoch whose accuracy is reported");
    train->add_option("--nn-lr", cfg.nn_lr, "Adam learning rate");
    train->add_option("--wavelet-lr", cfg.wavelet_lr, "wavelet gradient step");
    train->add_option("--freeze-epoch", cfg.freeze_epoch, "stop wavelet updates here");
    train->add_option("--train-seed", cfg.train_seed, "seed for fold jobs");
    train->add_option("--workers", cfg.workers, "parallel fold workers (0 = hardware)");
    train->add_option("--out-dir", cfg.out_dir, "output directory");

    CLI::App* diagnostics = app.add_subcommand("diagnostics", "singular value and basis plots");
    add_common(diagnostics);
    diagnostics->add_option("--out-dir", cfg.out_dir, "output directory");

    CLI::App* report = app.add_subcommand("report", "summarise a results.csv");
    report->add_option("--out-dir", report_dir, "directory holding results.csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            // file values as the base, flags the user actually passed on top
            const ExperimentConfig flag_cfg = cfg;
            cfg = load_config(config_path);
            CLI::App* sub = app.get_subcommands().front();
            auto passed = [&](const std::string& name) {
                return sub->count(name) > 0;
            };
            if (passed("--data-root")) cfg.data_root = flag_cfg.data_root;
            if (passed("--dataset")) cfg.dataset = flag_cfg.dataset;
            if (passed("--basis")) cfg.basis = flag_cfg.basis;
            if (passed("--chebyshev-m")) cfg.chebyshev_m = flag_cfg.chebyshev_m;
            if (sub == train) {
                if (passed("--mode")) cfg.mode = flag_cfg.mode;
                if (passed("--features")) cfg.features = flag_cfg.features;
                if (passed("--batch-size")) cfg.batch_size = flag_cfg.batch_size;
                if (passed("--epochs")) cfg.epochs = flag_cfg.epochs;
                if (passed("--record-epoch")) cfg.record_epoch = flag_cfg.record_epoch;
                if (passed("--nn-lr")) cfg.nn_lr = flag_cfg.nn_lr;
                if (passed("--wavelet-lr")) cfg.wavelet_lr = flag_cfg.wavelet_lr;
                if (passed("--freeze-epoch")) cfg.freeze_epoch = flag_cfg.freeze_epoch;
                if (passed("--train-seed")) cfg.train_seed = flag_cfg.train_seed;
                if (passed("--workers")) cfg.workers = flag_cfg.workers;
                if (passed("--out-dir")) cfg.out_dir = flag_cfg.out_dir;
            }
            if (sub == diagnostics && passed("--out-dir")) cfg.out_dir = flag_cfg.out_dir;
        }

        if (ingest->parsed()) return cmd_ingest(cfg.data_root, cfg.dataset, resave_dir);

        if (precompute_cmd->parsed()) {
            cfg.validate();
            const Dataset d = load_tudataset(cfg.data_root, cfg.dataset);
            load_or_precompute(cfg, d, cache_dir);
            return 0;
        }

        if (train->parsed()) {
            cfg.resolve_defaults();
            const Dataset d = load_tudataset(cfg.data_root, cfg.dataset);
            const PrecomputedData pre = load_or_precompute(cfg, d, cache_dir);
            std::cerr << "training " << cfg.dataset << ": mode=" << cfg.mode
                      << " features=" << cfg.features << " epochs=" << cfg.epochs
                      << " record=" << cfg.record_epoch << " batch=" << cfg.batch_size << "\n";
            const ExperimentOutput out = run_experiment(cfg, d, pre);
            write_experiment_outputs(cfg, out);
            std::cout << "grand mean accuracy: " << out.sheet.grand_mean << " +/- "
                      << out.sheet.std_dev << "\n"
                      << "outputs under " << cfg.out_dir << "\n";
            return 0;
        }

        if (diagnostics->parsed()) {
            cfg.validate();
            const Dataset d = load_tudataset(cfg.data_root, cfg.dataset);
            const PrecomputedData pre = load_or_precompute(cfg, d, cache_dir);
            if (cfg.out_dir.empty()) cfg.out_dir = "diagnostics/" + cfg.dataset;
            emit_diagnostics(pre, cfg.out_dir);
            std::cout << "diagnostics under " << cfg.out_dir << "\n";
            return 0;
        }

        if (report->parsed()) return cmd_report(report_dir);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
