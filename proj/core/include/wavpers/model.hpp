#ifndef WAVPERS_MODEL_HPP
#define WAVPERS_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "wavpers/graph.hpp"
#include "wavpers/layers.hpp"
#include "wavpers/parametrisation.hpp"
#include "wavpers/persistence.hpp"
#include "wavpers/vectorize.hpp"

namespace wavpers {

/// BN2D -> Conv -> ReLU, then BN2D -> Dropout -> Conv -> ReLU;
/// [B,3,20,20] -> [B,484] flattened.
struct CnnBranch {
    BatchNorm2d bn1;
    Conv2d conv1;
    ReLU relu1;
    BatchNorm2d bn2;
    Dropout dropout;
    Conv2d conv2;
    ReLU relu2;

    CnnBranch();
    void init(Rng& rng);
    Tensor forward(const Tensor& images, bool train, Rng& rng);
    Tensor backward(const Tensor& dflat);
    void collect_parameters(std::vector<Tensor*>& out);

    static constexpr int kOutputDim = 22 * 22;
};

/// BN -> Affine -> ReLU -> BN on the fixed feature vector.
struct MlpBranch {
    BatchNorm1d bn_in;
    Affine affine;
    ReLU relu;
    BatchNorm1d bn_out;

    explicit MlpBranch(int n);
    void init(Rng& rng);
    Tensor forward(const Tensor& x, bool train);
    Tensor backward(const Tensor& dy);
    void collect_parameters(std::vector<Tensor*>& out);
};

/// Two CNN branches and the feature MLP, concatenated into a single affine
/// head producing one logit per graph; sign gives the class.
class ClassifierNet {
public:
    explicit ClassifierNet(int feature_dim);

    void init(Rng& rng);
    std::vector<double> forward(const Tensor& opt_images, const Tensor& static_images,
                                const Tensor& features, bool train, Rng& rng);

    /// Logit cotangents -> gradient w.r.t. the optimisable images; all
    /// parameter gradients are accumulated on the way.
    Tensor backward(const std::vector<double>& dlogits);

    std::vector<Tensor*> parameters();
    void zero_grad();
    int feature_dim() const { return feature_dim_; }

    CnnBranch cnn_opt;
    CnnBranch cnn_static;
    MlpBranch mlp;
    Affine head;

private:
    int feature_dim_;
    int cached_batch_ = 0;
};

/// Adam with bias correction; moments are kept per registered parameter.
class Adam {
public:
    explicit Adam(double lr) : lr_(lr) {}

    void step(const std::vector<Tensor*>& params);

    double lr() const { return lr_; }
    int step_count() const { return t_; }

    // checkpoint access
    const std::vector<std::vector<double>>& first_moments() const { return m_; }
    const std::vector<std::vector<double>>& second_moments() const { return v_; }
    void restore(int t, std::vector<std::vector<double>> m, std::vector<std::vector<double>> v);

    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

private:
    double lr_;
    int t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

/// Everything precomputed once per dataset and shared across folds.
struct PipelineInputs {
    const Dataset* dataset = nullptr;
    const Parametrisation* param = nullptr; // reconditioned
    Eigen::VectorXd theta_init;
    AffineRescale rescale;
    ImageSpec image_spec;
    std::vector<std::vector<double>> static_images; // per graph, 3*grid*grid
    std::vector<Eigen::VectorXd> features;          // per graph

    int feature_dim() const {
        return features.empty() ? 0 : static_cast<int>(features.front().size());
    }
};

struct TrainSettings {
    double nn_lr = 1e-3;
    double wavelet_lr = 1e-2;
    int freeze_epoch = 50; // wavelet updates stop here; 0 = control mode
};

/// The trainable pipeline for one fold: wavelet coefficients -> vertex
/// functions -> extended persistence -> images -> classifier.
class GraphClassifier {
public:
    GraphClassifier(const PipelineInputs& inputs, const TrainSettings& settings,
                    std::uint64_t seed);

    /// Train-mode forward + loss + full backward, including the pullback of
    /// image gradients through the diagrams to the wavelet coefficients.
    double train_batch(const std::vector<int>& graph_ids);

    /// Applies Adam to the network and, while epoch < freeze_epoch,
    /// gradient descent to the wavelet coefficients; clears gradients.
    void step(int epoch);

    /// Eval-mode logits (running statistics, no dropout).
    std::vector<double> predict(const std::vector<int>& graph_ids);
    double accuracy(const std::vector<int>& graph_ids);

    const Eigen::VectorXd& theta() const { return theta_; }
    Eigen::VectorXd& theta() { return theta_; }
    const Eigen::VectorXd& theta_gradient() const { return theta_grad_; }
    ClassifierNet& net() { return net_; }
    Rng& rng() { return rng_; }
    int nongeneric_count() const { return nongeneric_count_; }

    /// Versioned binary checkpoint: parameters, optimiser moments, wavelet
    /// coefficients, running statistics and RNG state.
    void save_checkpoint(std::ostream& os) const;
    void load_checkpoint(std::istream& is);

    /// Forward only, for finite-difference probes: returns logits with
    /// train-mode statistics but a caller-controlled RNG for dropout.
    std::vector<double> forward_logits(const std::vector<int>& graph_ids, bool train);

private:
    Tensor assemble_opt_images(const std::vector<int>& graph_ids, bool with_backward);
    Tensor assemble_static_images(const std::vector<int>& graph_ids) const;
    Tensor assemble_features(const std::vector<int>& graph_ids) const;

    const PipelineInputs& inputs_;
    TrainSettings settings_;
    ClassifierNet net_;
    Adam adam_;
    Eigen::VectorXd theta_;
    Eigen::VectorXd theta_grad_;
    Rng rng_;
    int nongeneric_count_ = 0;

    // per-batch state for backward
    std::vector<int> batch_ids_;
    std::vector<DiagramImage> batch_images_;
    std::vector<ExtendedDiagram> batch_diagrams_;

    // reuse pixel buffers while the wavelet is not moving; keyed by the
    // exact coefficients they were rendered with
    struct CachedImage {
        Eigen::VectorXd theta_used; // empty = never filled
        std::vector<double> pixels;
    };
    std::vector<CachedImage> image_cache_;
};

} // namespace wavpers

#endif // WAVPERS_MODEL_HPP
