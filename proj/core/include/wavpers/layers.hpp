#ifndef WAVPERS_LAYERS_HPP
#define WAVPERS_LAYERS_HPP

#include <vector>

#include "wavpers/rng.hpp"
#include "wavpers/tensor.hpp"

namespace wavpers {

/// 2D convolution, kernel 2, stride 1, padding 1: [B,C,H,W] -> [B,O,H+1,W+1].
struct Conv2d {
    int in_channels = 0;
    int out_channels = 0;
    static constexpr int kKernel = 2;
    static constexpr int kPad = 1;

    Tensor weight; // [out, in, k, k]
    Tensor bias;   // [out]

    Conv2d() = default;
    Conv2d(int in_ch, int out_ch);

    void init(Rng& rng);
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

private:
    Tensor cached_input_;
};

/// Per-channel batch normalisation over (batch, height, width).
struct BatchNorm2d {
    int channels = 0;
    double momentum = 0.1;
    double eps = 1e-5;

    Tensor gamma; // [C]
    Tensor beta;  // [C]
    std::vector<double> running_mean;
    std::vector<double> running_var;

    BatchNorm2d() = default;
    explicit BatchNorm2d(int ch);

    Tensor forward(const Tensor& x, bool train);
    Tensor backward(const Tensor& dy);

private:
    Tensor cached_xhat_;
    std::vector<double> cached_inv_std_;
    std::vector<int> cached_shape_;
    bool cached_train_ = false;
};

/// Per-feature batch normalisation over the batch: [B,N].
struct BatchNorm1d {
    int features = 0;
    double momentum = 0.1;
    double eps = 1e-5;

    Tensor gamma;
    Tensor beta;
    std::vector<double> running_mean;
    std::vector<double> running_var;

    BatchNorm1d() = default;
    explicit BatchNorm1d(int n);

    Tensor forward(const Tensor& x, bool train);
    Tensor backward(const Tensor& dy);

private:
    Tensor cached_xhat_;
    std::vector<double> cached_inv_std_;
    int cached_batch_ = 0;
    bool cached_train_ = false;
};

struct ReLU {
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

private:
    std::vector<char> cached_active_;
};

/// Inverted dropout: train mode zeroes w.p. p and rescales by 1/(1-p);
/// eval mode is the identity.
struct Dropout {
    double p = 0.5;

    Tensor forward(const Tensor& x, bool train, Rng& rng);
    Tensor backward(const Tensor& dy);

    const std::vector<char>& last_mask() const { return mask_; }

private:
    std::vector<char> mask_;
    bool cached_train_ = false;
};

/// y = W x + b on [B,in] -> [B,out].
struct Affine {
    int in_features = 0;
    int out_features = 0;

    Tensor weight; // [out, in]
    Tensor bias;   // [out]

    Affine() = default;
    Affine(int in, int out);

    void init(Rng& rng);
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

private:
    Tensor cached_input_;
};

/// Numerically stable mean binary cross entropy on logits; labels in {0,1}.
/// dlogits, when non-null, receives d(loss)/d(logit).
double bce_loss(const std::vector<double>& logits, const std::vector<int>& labels,
                std::vector<double>* dlogits = nullptr);

} // namespace wavpers

#endif // WAVPERS_LAYERS_HPP
