#include "wavpers/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "wavpers/errors.hpp"
#include "wavpers/folds.hpp"
#include "wavpers/rng.hpp"

namespace fs = std::filesystem;

namespace wavpers {

PipelineInputs make_pipeline_inputs(const Dataset& d, const PrecomputedData& pre,
                                    bool with_features) {
    PipelineInputs in;
    in.dataset = &d;
    in.param = &pre.recond_param;
    in.theta_init = pre.theta_init;
    in.rescale = pre.rescale;
    in.image_spec = pre.image_spec;
    in.static_images = pre.static_images;
    if (with_features) {
        in.features = pre.features;
    } else {
        in.features.assign(d.size(), Eigen::VectorXd(0));
    }
    return in;
}

std::uint64_t fold_job_seed(std::uint64_t train_seed, std::uint64_t partition_seed, int fold) {
    Rng mixer(train_seed ^ (partition_seed * 0x9e3779b97f4a7c15ULL));
    std::uint64_t seed = 0;
    for (int i = 0; i <= fold; ++i) seed = mixer.next_u64();
    return seed;
}

FoldResult run_fold(const PipelineInputs& inputs, const TrainSettings& settings,
                    const std::vector<int>& train_ids, const std::vector<int>& test_ids,
                    int epochs, int record_epoch, int batch_size, std::uint64_t job_seed) {
    if (epochs < 1) throw config_error("run_fold: need at least one epoch");
    if (batch_size < 1) throw config_error("run_fold: batch size must be positive");
    Rng shuffle_rng(job_seed);
    GraphClassifier model(inputs, settings, job_seed ^ 0x5bf03635a1d34fcdULL);

    std::set<int> test_set(test_ids.begin(), test_ids.end());
    std::vector<int> order = train_ids;

    FoldResult result;
    result.train_loss_curve.reserve(epochs);
    result.test_acc_curve.reserve(epochs);
    bool recorded = false;

    for (int epoch = 0; epoch < epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        int batches = 0;
        for (std::size_t at = 0; at < order.size(); at += batch_size) {
            const std::size_t end = std::min(order.size(), at + batch_size);
            std::vector<int> batch(order.begin() + at, order.begin() + end);
            for (int id : batch)
                if (test_set.count(id))
                    throw numerical_error("fold hygiene: test graph found in a training batch");
            epoch_loss += model.train_batch(batch);
            model.step(epoch);
            ++batches;
        }
        result.train_loss_curve.push_back(epoch_loss / std::max(1, batches));
        result.test_acc_curve.push_back(model.accuracy(test_ids));
        if (epoch + 1 == record_epoch) {
            result.test_accuracy = result.test_acc_curve.back();
            recorded = true;
        }
    }
    if (!recorded) result.test_accuracy = result.test_acc_curve.back();
    result.final_train_loss = result.train_loss_curve.back();
    result.nongeneric_forwards = model.nongeneric_count();
    return result;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const Dataset& d,
                                const PrecomputedData& pre) {
    const PipelineInputs inputs = make_pipeline_inputs(d, pre, cfg.with_features());

    TrainSettings settings;
    settings.nn_lr = cfg.nn_lr;
    settings.wavelet_lr = cfg.wavelet_lr;
    settings.freeze_epoch = cfg.control_mode() ? 0 : cfg.freeze_epoch;

    struct Job {
        std::uint64_t partition_seed;
        int fold;
        std::vector<int> train_ids;
        std::vector<int> test_ids;
    };
    std::vector<Job> jobs;
    for (std::uint64_t seed : cfg.fold_seeds) {
        const auto folds = make_folds(d, seed);
        for (int f = 0; f < static_cast<int>(folds.size()); ++f) {
            Job job;
            job.partition_seed = seed;
            job.fold = f;
            job.test_ids = folds[f];
            for (int g = 0; g < static_cast<int>(folds.size()); ++g)
                if (g != f) job.train_ids.insert(job.train_ids.end(), folds[g].begin(),
                                                 folds[g].end());
            jobs.push_back(std::move(job));
        }
    }

    ExperimentOutput out;
    out.folds.resize(jobs.size());

    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, static_cast<int>(jobs.size()));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            try {
                FoldResult r = run_fold(inputs, settings, job.train_ids, job.test_ids,
                                        cfg.epochs, cfg.record_epoch, cfg.batch_size,
                                        fold_job_seed(cfg.train_seed, job.partition_seed,
                                                      job.fold));
                r.partition_seed = job.partition_seed;
                r.fold = job.fold;
                out.folds[i] = std::move(r);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                failure = "fold (seed=" + std::to_string(job.partition_seed) +
                          ", fold=" + std::to_string(job.fold) + ") failed: " + e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw numerical_error(failure);

    out.sheet = summarise(out.folds);
    return out;
}

ResultSheet summarise(const std::vector<FoldResult>& folds) {
    ResultSheet sheet;
    // group by partition seed in encounter order
    std::vector<std::uint64_t> seeds;
    for (const auto& f : folds)
        if (std::find(seeds.begin(), seeds.end(), f.partition_seed) == seeds.end())
            seeds.push_back(f.partition_seed);

    for (std::uint64_t s : seeds) {
        double sum = 0.0;
        int count = 0;
        for (const auto& f : folds) {
            if (f.partition_seed != s) continue;
            sum += f.test_accuracy;
            ++count;
        }
        sheet.tenfold_means.push_back(sum / count);
    }

    const int n = static_cast<int>(sheet.tenfold_means.size());
    sheet.grand_mean =
        std::accumulate(sheet.tenfold_means.begin(), sheet.tenfold_means.end(), 0.0) / n;
    if (n > 1) {
        double ss = 0.0;
        for (double m : sheet.tenfold_means) ss += (m - sheet.grand_mean) * (m - sheet.grand_mean);
        sheet.std_dev = std::sqrt(ss / (n - 1));
    }
    return sheet;
}

void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out) {
    fs::create_directories(cfg.out_dir);

    {
        std::ofstream results(fs::path(cfg.out_dir) / "results.csv");
        results << "partition_seed,fold,test_accuracy,final_train_loss,nongeneric_forwards\n";
        results.precision(17);
        for (const auto& f : out.folds)
            results << f.partition_seed << ',' << f.fold << ',' << f.test_accuracy << ','
                    << f.final_train_loss << ',' << f.nongeneric_forwards << '\n';
    }
    {
        std::ofstream summary(fs::path(cfg.out_dir) / "summary.csv");
        summary.precision(17);
        summary << "# dataset=" << cfg.dataset << " basis=" << cfg.basis << " mode=" << cfg.mode
                << " features=" << cfg.features << " batch_size=" << cfg.batch_size
                << (cfg.batch_size_is_fallback ? " (fallback default, not a published value)" : "")
                << " record_epoch=" << cfg.record_epoch << " epochs=" << cfg.epochs << "\n";
        summary << "tenfold,mean_accuracy\n";
        for (std::size_t i = 0; i < out.sheet.tenfold_means.size(); ++i)
            summary << i << ',' << out.sheet.tenfold_means[i] << '\n';
        summary << "grand_mean," << out.sheet.grand_mean << '\n';
        summary << "std_dev," << out.sheet.std_dev << '\n';
    }
    for (const auto& f : out.folds) {
        std::ofstream curve(fs::path(cfg.out_dir) / ("loss_curve_" +
                                                     std::to_string(f.partition_seed) + "_" +
                                                     std::to_string(f.fold) + ".csv"));
        curve.precision(17);
        curve << "epoch,train_loss,test_accuracy\n";
        for (std::size_t e = 0; e < f.train_loss_curve.size(); ++e)
            curve << (e + 1) << ',' << f.train_loss_curve[e] << ',' << f.test_acc_curve[e]
                  << '\n';
    }
}

namespace {

void write_svg_lines(const std::string& path, const std::vector<std::vector<double>>& ys,
                     double y_min, double y_max, const std::string& title) {
    std::ofstream svg(path);
    const int width = 640, height = 400, margin = 40;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    svg << "<text x=\"" << margin << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
    svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
        << "\" height=\"" << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};
    for (std::size_t s = 0; s < ys.size(); ++s) {
        const auto& y = ys[s];
        if (y.size() < 2) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << colors[s % 12] << "\" points=\"";
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double px = margin + (width - 2.0 * margin) * i / (y.size() - 1);
            const double frac = (y[i] - y_min) / (y_max - y_min);
            const double py = height - margin - (height - 2.0 * margin) * frac;
            svg << px << ',' << py << ' ';
        }
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
}

} // namespace

void emit_diagnostics(const PrecomputedData& pre, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const Parametrisation& raw = pre.raw_param;
    const Parametrisation& rec = pre.recond_param;

    {
        std::ofstream csv(fs::path(out_dir) / ("singular_values_" + pre.basis_kind + ".csv"));
        csv.precision(17);
        csv << "k,sigma,sigma_over_max\n";
        for (int k = 0; k < raw.rank; ++k)
            csv << k << ',' << raw.singular_values[k] << ','
                << raw.singular_values[k] / raw.singular_values[0] << '\n';
    }
    {
        std::ofstream csv(fs::path(out_dir) /
                          ("reconditioned_singular_values_" + pre.basis_kind + ".csv"));
        csv.precision(17);
        csv << "k,sigma\n";
        for (int k = 0; k < rec.rank; ++k) csv << k << ',' << rec.singular_values[k] << '\n';
    }
    {
        std::ofstream csv(fs::path(out_dir) / ("reconditioned_basis_" + pre.basis_kind + ".csv"));
        csv.precision(17);
        csv << "x";
        for (int k = 0; k < rec.basis.size(); ++k) csv << ",h" << k;
        csv << '\n';
        constexpr int kSamples = 200;
        for (int i = 0; i < kSamples; ++i) {
            const double x = 2.0 * i / (kSamples - 1);
            csv << x;
            for (int k = 0; k < rec.basis.size(); ++k) csv << ',' << rec.basis.evaluate(k, x);
            csv << '\n';
        }
    }

    // log10 spread of the raw spectrum, one polyline
    {
        std::vector<double> logs;
        for (int k = 0; k < raw.rank; ++k)
            logs.push_back(std::log10(raw.singular_values[k] / raw.singular_values[0]));
        const double lo = *std::min_element(logs.begin(), logs.end());
        write_svg_lines((fs::path(out_dir) / ("singular_values_" + pre.basis_kind + ".svg"))
                            .string(),
                        {logs}, std::min(lo, -1.0), 0.0,
                        "log10 sigma_k / sigma_max (" + pre.basis_kind + ")");
    }
    {
        constexpr int kSamples = 200;
        std::vector<std::vector<double>> curves(rec.basis.size());
        double lo = 0.0, hi = 0.0;
        for (int k = 0; k < rec.basis.size(); ++k) {
            curves[k].resize(kSamples);
            for (int i = 0; i < kSamples; ++i) {
                const double x = 2.0 * i / (kSamples - 1);
                curves[k][i] = rec.basis.evaluate(k, x);
                lo = std::min(lo, curves[k][i]);
                hi = std::max(hi, curves[k][i]);
            }
        }
        if (hi <= lo) hi = lo + 1.0;
        write_svg_lines((fs::path(out_dir) / ("reconditioned_basis_" + pre.basis_kind + ".svg"))
                            .string(),
                        curves, lo, hi, "reconditioned wavelet basis (" + pre.basis_kind + ")");
    }
}

} // namespace wavpers
