#include "wavpers/model.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "wavpers/errors.hpp"

namespace wavpers {

CnnBranch::CnnBranch() : bn1(3), conv1(3, 20), bn2(20), conv2(20, 1) {}

void CnnBranch::init(Rng& rng) {
    conv1.init(rng);
    conv2.init(rng);
}

Tensor CnnBranch::forward(const Tensor& images, bool train, Rng& rng) {
    Tensor t = bn1.forward(images, train);
    t = conv1.forward(t);
    t = relu1.forward(t);
    t = bn2.forward(t, train);
    t = dropout.forward(t, train, rng);
    t = conv2.forward(t);
    t = relu2.forward(t);
    // [B,1,22,22] -> [B,484]
    t.shape = {t.shape[0], kOutputDim};
    return t;
}

Tensor CnnBranch::backward(const Tensor& dflat) {
    Tensor d = dflat;
    d.shape = {dflat.shape[0], 1, 22, 22};
    d = relu2.backward(d);
    d = conv2.backward(d);
    d = dropout.backward(d);
    d = bn2.backward(d);
    d = relu1.backward(d);
    d = conv1.backward(d);
    d = bn1.backward(d);
    return d;
}

void CnnBranch::collect_parameters(std::vector<Tensor*>& out) {
    out.push_back(&bn1.gamma);
    out.push_back(&bn1.beta);
    out.push_back(&conv1.weight);
    out.push_back(&conv1.bias);
    out.push_back(&bn2.gamma);
    out.push_back(&bn2.beta);
    out.push_back(&conv2.weight);
    out.push_back(&conv2.bias);
}

MlpBranch::MlpBranch(int n) : bn_in(n), affine(n, n), bn_out(n) {}

void MlpBranch::init(Rng& rng) { affine.init(rng); }

Tensor MlpBranch::forward(const Tensor& x, bool train) {
    Tensor t = bn_in.forward(x, train);
    t = affine.forward(t);
    t = relu.forward(t);
    return bn_out.forward(t, train);
}

Tensor MlpBranch::backward(const Tensor& dy) {
    Tensor d = bn_out.backward(dy);
    d = relu.backward(d);
    d = affine.backward(d);
    return bn_in.backward(d);
}

void MlpBranch::collect_parameters(std::vector<Tensor*>& out) {
    out.push_back(&bn_in.gamma);
    out.push_back(&bn_in.beta);
    out.push_back(&affine.weight);
    out.push_back(&affine.bias);
    out.push_back(&bn_out.gamma);
    out.push_back(&bn_out.beta);
}

ClassifierNet::ClassifierNet(int feature_dim)
    : mlp(feature_dim),
      head(2 * CnnBranch::kOutputDim + feature_dim, 1),
      feature_dim_(feature_dim) {}

void ClassifierNet::init(Rng& rng) {
    cnn_opt.init(rng);
    cnn_static.init(rng);
    mlp.init(rng);
    head.init(rng);
}

std::vector<double> ClassifierNet::forward(const Tensor& opt_images,
                                           const Tensor& static_images, const Tensor& features,
                                           bool train, Rng& rng) {
    const int batch = opt_images.shape[0];
    cached_batch_ = batch;

    Tensor a = cnn_opt.forward(opt_images, train, rng);
    Tensor b = cnn_static.forward(static_images, train, rng);
    Tensor c = mlp.forward(features, train);

    Tensor concat({batch, 2 * CnnBranch::kOutputDim + feature_dim_});
    const int wa = CnnBranch::kOutputDim, wc = feature_dim_;
    for (int i = 0; i < batch; ++i) {
        double* row = concat.v.data() + static_cast<std::size_t>(i) * concat.shape[1];
        std::memcpy(row, a.v.data() + static_cast<std::size_t>(i) * wa, wa * sizeof(double));
        std::memcpy(row + wa, b.v.data() + static_cast<std::size_t>(i) * wa, wa * sizeof(double));
        std::memcpy(row + 2 * wa, c.v.data() + static_cast<std::size_t>(i) * wc,
                    wc * sizeof(double));
    }
    Tensor logits = head.forward(concat);
    return {logits.v.begin(), logits.v.end()};
}

Tensor ClassifierNet::backward(const std::vector<double>& dlogits) {
    const int batch = cached_batch_;
    Tensor dl({batch, 1});
    dl.v.assign(dlogits.begin(), dlogits.end());
    Tensor dconcat = head.backward(dl);

    const int wa = CnnBranch::kOutputDim, wc = feature_dim_;
    Tensor da({batch, wa}), db({batch, wa}), dc({batch, wc});
    for (int i = 0; i < batch; ++i) {
        const double* row = dconcat.v.data() + static_cast<std::size_t>(i) * dconcat.shape[1];
        std::memcpy(da.v.data() + static_cast<std::size_t>(i) * wa, row, wa * sizeof(double));
        std::memcpy(db.v.data() + static_cast<std::size_t>(i) * wa, row + wa, wa * sizeof(double));
        std::memcpy(dc.v.data() + static_cast<std::size_t>(i) * wc, row + 2 * wa,
                    wc * sizeof(double));
    }
    mlp.backward(dc);          // parameter gradients only
    cnn_static.backward(db);   // parameter gradients only
    return cnn_opt.backward(da);
}

std::vector<Tensor*> ClassifierNet::parameters() {
    std::vector<Tensor*> out;
    cnn_opt.collect_parameters(out);
    cnn_static.collect_parameters(out);
    mlp.collect_parameters(out);
    out.push_back(&head.weight);
    out.push_back(&head.bias);
    return out;
}

void ClassifierNet::zero_grad() {
    for (Tensor* t : parameters()) t->zero_grad();
}

void Adam::step(const std::vector<Tensor*>& params) {
    if (m_.empty()) {
        m_.resize(params.size());
        v_.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i].assign(params[i]->v.size(), 0.0);
            v_[i].assign(params[i]->v.size(), 0.0);
        }
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, t_);
    const double bc2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        p.ensure_grad();
        for (std::size_t j = 0; j < p.v.size(); ++j) {
            m_[i][j] = kBeta1 * m_[i][j] + (1.0 - kBeta1) * p.g[j];
            v_[i][j] = kBeta2 * v_[i][j] + (1.0 - kBeta2) * p.g[j] * p.g[j];
            const double mhat = m_[i][j] / bc1;
            const double vhat = v_[i][j] / bc2;
            p.v[j] -= lr_ * mhat / (std::sqrt(vhat) + kEps);
        }
    }
}

void Adam::restore(int t, std::vector<std::vector<double>> m,
                   std::vector<std::vector<double>> v) {
    t_ = t;
    m_ = std::move(m);
    v_ = std::move(v);
}

GraphClassifier::GraphClassifier(const PipelineInputs& inputs, const TrainSettings& settings,
                                 std::uint64_t seed)
    : inputs_(inputs),
      settings_(settings),
      net_(inputs.feature_dim()),
      adam_(settings.nn_lr),
      theta_(inputs.theta_init),
      theta_grad_(Eigen::VectorXd::Zero(inputs.theta_init.size())),
      rng_(seed),
      image_cache_(inputs.dataset->size()) {
    net_.init(rng_);
}

Tensor GraphClassifier::assemble_opt_images(const std::vector<int>& graph_ids,
                                            bool with_backward) {
    const int per_image = DiagramImage::kChannels * inputs_.image_spec.n_pixels();
    Tensor t({static_cast<int>(graph_ids.size()), DiagramImage::kChannels,
              inputs_.image_spec.grid, inputs_.image_spec.grid});
    if (with_backward) {
        batch_ids_ = graph_ids;
        batch_images_.clear();
        batch_diagrams_.clear();
    }
    for (std::size_t i = 0; i < graph_ids.size(); ++i) {
        const int id = graph_ids[i];
        const double* pixels = nullptr;
        CachedImage& cache = image_cache_[id];
        const bool cache_hit = cache.theta_used.size() == theta_.size() &&
                               cache.theta_used == theta_;
        if (!with_backward && cache_hit) {
            pixels = cache.pixels.data();
        } else {
            const Eigen::VectorXd f = inputs_.param->apply_graph(id, theta_);
            ExtendedDiagram diagram = extended_persistence(inputs_.dataset->graphs[id], f);
            if (!diagram.generic) ++nongeneric_count_;
            DiagramImage image(diagram, inputs_.rescale, inputs_.image_spec);
            if (with_backward) {
                batch_diagrams_.push_back(std::move(diagram));
                batch_images_.push_back(std::move(image));
                pixels = batch_images_.back().pixels().data();
            } else {
                cache.theta_used = theta_;
                cache.pixels = image.pixels();
                pixels = cache.pixels.data();
            }
        }
        std::memcpy(t.v.data() + i * per_image, pixels, per_image * sizeof(double));
    }
    return t;
}

Tensor GraphClassifier::assemble_static_images(const std::vector<int>& graph_ids) const {
    const int per_image = DiagramImage::kChannels * inputs_.image_spec.n_pixels();
    Tensor t({static_cast<int>(graph_ids.size()), DiagramImage::kChannels,
              inputs_.image_spec.grid, inputs_.image_spec.grid});
    for (std::size_t i = 0; i < graph_ids.size(); ++i)
        std::memcpy(t.v.data() + i * per_image, inputs_.static_images[graph_ids[i]].data(),
                    per_image * sizeof(double));
    return t;
}

Tensor GraphClassifier::assemble_features(const std::vector<int>& graph_ids) const {
    const int n = inputs_.feature_dim();
    Tensor t({static_cast<int>(graph_ids.size()), n});
    for (std::size_t i = 0; i < graph_ids.size(); ++i)
        for (int j = 0; j < n; ++j) t.v[i * n + j] = inputs_.features[graph_ids[i]][j];
    return t;
}

std::vector<double> GraphClassifier::forward_logits(const std::vector<int>& graph_ids,
                                                    bool train) {
    Tensor opt = assemble_opt_images(graph_ids, false);
    Tensor stat = assemble_static_images(graph_ids);
    Tensor feat = assemble_features(graph_ids);
    return net_.forward(opt, stat, feat, train, rng_);
}

double GraphClassifier::train_batch(const std::vector<int>& graph_ids) {
    Tensor opt = assemble_opt_images(graph_ids, true);
    Tensor stat = assemble_static_images(graph_ids);
    Tensor feat = assemble_features(graph_ids);

    std::vector<double> logits = net_.forward(opt, stat, feat, true, rng_);
    std::vector<int> labels(graph_ids.size());
    for (std::size_t i = 0; i < graph_ids.size(); ++i)
        labels[i] = inputs_.dataset->labels[graph_ids[i]];

    std::vector<double> dlogits;
    const double loss = bce_loss(logits, labels, &dlogits);

    Tensor dopt = net_.backward(dlogits);

    // pull image cotangents back through diagrams to the wavelet coefficients
    const int per_image = DiagramImage::kChannels * inputs_.image_spec.n_pixels();
    for (std::size_t i = 0; i < graph_ids.size(); ++i) {
        std::vector<double> dpixels(dopt.v.begin() + i * per_image,
                                    dopt.v.begin() + (i + 1) * per_image);
        const DiagramCotangent ct = batch_images_[i].backward(dpixels);
        const Eigen::VectorXd grad_f = diagram_gradient(
            batch_diagrams_[i], ct, inputs_.dataset->graphs[graph_ids[i]].n_vertices);
        theta_grad_ += inputs_.param->pullback_gradient_graph(graph_ids[i], grad_f);
    }
    return loss;
}

void GraphClassifier::step(int epoch) {
    adam_.step(net_.parameters());
    if (epoch < settings_.freeze_epoch) theta_ -= settings_.wavelet_lr * theta_grad_;
    net_.zero_grad();
    theta_grad_.setZero();
}

std::vector<double> GraphClassifier::predict(const std::vector<int>& graph_ids) {
    return forward_logits(graph_ids, false);
}

double GraphClassifier::accuracy(const std::vector<int>& graph_ids) {
    const std::vector<double> logits = predict(graph_ids);
    int correct = 0;
    for (std::size_t i = 0; i < graph_ids.size(); ++i) {
        const int predicted = logits[i] > 0.0 ? 1 : 0;
        if (predicted == inputs_.dataset->labels[graph_ids[i]]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(graph_ids.size());
}

namespace {

constexpr std::uint32_t kCheckpointMagic = 0x57565043; // "WVPC"
constexpr std::uint32_t kCheckpointVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void put_doubles(std::ostream& os, const double* p, std::size_t n) {
    put_u64(os, n);
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
std::vector<double> get_doubles(std::istream& is) {
    const std::uint64_t n = get_u64(is);
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    return v;
}

} // namespace

void GraphClassifier::save_checkpoint(std::ostream& os) const {
    put_u32(os, kCheckpointMagic);
    put_u32(os, kCheckpointVersion);

    auto& self = const_cast<GraphClassifier&>(*this);
    const auto params = self.net_.parameters();
    put_u64(os, params.size());
    for (const Tensor* t : params) put_doubles(os, t->v.data(), t->v.size());

    // batch-norm running statistics, fixed traversal order
    auto put_bn2 = [&](const BatchNorm2d& bn) {
        put_doubles(os, bn.running_mean.data(), bn.running_mean.size());
        put_doubles(os, bn.running_var.data(), bn.running_var.size());
    };
    auto put_bn1 = [&](const BatchNorm1d& bn) {
        put_doubles(os, bn.running_mean.data(), bn.running_mean.size());
        put_doubles(os, bn.running_var.data(), bn.running_var.size());
    };
    put_bn2(self.net_.cnn_opt.bn1);
    put_bn2(self.net_.cnn_opt.bn2);
    put_bn2(self.net_.cnn_static.bn1);
    put_bn2(self.net_.cnn_static.bn2);
    put_bn1(self.net_.mlp.bn_in);
    put_bn1(self.net_.mlp.bn_out);

    put_u64(os, static_cast<std::uint64_t>(adam_.step_count()));
    const auto& m = adam_.first_moments();
    const auto& v = adam_.second_moments();
    put_u64(os, m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        put_doubles(os, m[i].data(), m[i].size());
        put_doubles(os, v[i].data(), v[i].size());
    }

    put_doubles(os, theta_.data(), static_cast<std::size_t>(theta_.size()));
    put_u64(os, rng_.state());
    put_u64(os, static_cast<std::uint64_t>(nongeneric_count_));
}

void GraphClassifier::load_checkpoint(std::istream& is) {
    if (get_u32(is) != kCheckpointMagic) throw data_error("checkpoint: bad magic");
    if (get_u32(is) != kCheckpointVersion) throw data_error("checkpoint: unsupported version");

    const auto params = net_.parameters();
    if (get_u64(is) != params.size()) throw data_error("checkpoint: parameter count mismatch");
    for (Tensor* t : params) {
        auto vals = get_doubles(is);
        if (vals.size() != t->v.size()) throw data_error("checkpoint: parameter size mismatch");
        t->v = std::move(vals);
    }

    auto get_bn2 = [&](BatchNorm2d& bn) {
        bn.running_mean = get_doubles(is);
        bn.running_var = get_doubles(is);
    };
    auto get_bn1 = [&](BatchNorm1d& bn) {
        bn.running_mean = get_doubles(is);
        bn.running_var = get_doubles(is);
    };
    get_bn2(net_.cnn_opt.bn1);
    get_bn2(net_.cnn_opt.bn2);
    get_bn2(net_.cnn_static.bn1);
    get_bn2(net_.cnn_static.bn2);
    get_bn1(net_.mlp.bn_in);
    get_bn1(net_.mlp.bn_out);

    const int t = static_cast<int>(get_u64(is));
    const std::uint64_t n_moments = get_u64(is);
    std::vector<std::vector<double>> m(n_moments), v(n_moments);
    for (std::uint64_t i = 0; i < n_moments; ++i) {
        m[i] = get_doubles(is);
        v[i] = get_doubles(is);
    }
    adam_.restore(t, std::move(m), std::move(v));

    auto th = get_doubles(is);
    if (static_cast<Eigen::Index>(th.size()) != theta_.size())
        throw data_error("checkpoint: wavelet coefficient size mismatch");
    for (std::size_t i = 0; i < th.size(); ++i) theta_[static_cast<Eigen::Index>(i)] = th[i];

    rng_.set_state(get_u64(is));
    nongeneric_count_ = static_cast<int>(get_u64(is));
    if (!is) throw data_error("checkpoint: truncated stream");
    for (auto& c : image_cache_) c.theta_used.resize(0);
}

} // namespace wavpers
