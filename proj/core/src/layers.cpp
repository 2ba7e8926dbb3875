#include "wavpers/layers.hpp"

#include <cmath>

#include "wavpers/errors.hpp"

namespace wavpers {

namespace {

void check_shape(const Tensor& x, std::size_t dims, const char* who) {
    if (x.shape.size() != dims) throw numerical_error(std::string(who) + ": wrong tensor rank");
}

double uniform_fan_in(Rng& rng, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    return rng.uniform(-bound, bound);
}

} // namespace

Conv2d::Conv2d(int in_ch, int out_ch) : in_channels(in_ch), out_channels(out_ch) {
    weight = Tensor({out_ch, in_ch, kKernel, kKernel});
    bias = Tensor({out_ch});
    weight.ensure_grad();
    bias.ensure_grad();
}

void Conv2d::init(Rng& rng) {
    const int fan_in = in_channels * kKernel * kKernel;
    for (double& w : weight.v) w = uniform_fan_in(rng, fan_in);
    for (double& b : bias.v) b = uniform_fan_in(rng, fan_in);
}

Tensor Conv2d::forward(const Tensor& x) {
    check_shape(x, 4, "conv2d");
    const int batch = x.shape[0], ch = x.shape[1], h = x.shape[2], w = x.shape[3];
    if (ch != in_channels) throw numerical_error("conv2d: channel mismatch");
    const int oh = h + 2 * kPad - kKernel + 1;
    const int ow = w + 2 * kPad - kKernel + 1;

    cached_input_ = x;
    Tensor y({batch, out_channels, oh, ow});
    for (int b = 0; b < batch; ++b) {
        const double* xb = x.v.data() + static_cast<std::size_t>(b) * ch * h * w;
        double* yb = y.v.data() + static_cast<std::size_t>(b) * out_channels * oh * ow;
        for (int oc = 0; oc < out_channels; ++oc) {
            const double* wk = weight.v.data() +
                               static_cast<std::size_t>(oc) * in_channels * kKernel * kKernel;
            double* plane = yb + static_cast<std::size_t>(oc) * oh * ow;
            for (int oy = 0; oy < oh; ++oy) {
                for (int ox = 0; ox < ow; ++ox) {
                    double acc = bias.v[oc];
                    for (int ic = 0; ic < in_channels; ++ic) {
                        const double* xplane = xb + static_cast<std::size_t>(ic) * h * w;
                        const double* wic = wk + ic * kKernel * kKernel;
                        for (int ky = 0; ky < kKernel; ++ky) {
                            const int iy = oy - kPad + ky;
                            if (iy < 0 || iy >= h) continue;
                            for (int kx = 0; kx < kKernel; ++kx) {
                                const int ix = ox - kPad + kx;
                                if (ix < 0 || ix >= w) continue;
                                acc += wic[ky * kKernel + kx] * xplane[iy * w + ix];
                            }
                        }
                    }
                    plane[oy * ow + ox] = acc;
                }
            }
        }
    }
    return y;
}

Tensor Conv2d::backward(const Tensor& dy) {
    const Tensor& x = cached_input_;
    const int batch = x.shape[0], ch = x.shape[1], h = x.shape[2], w = x.shape[3];
    const int oh = dy.shape[2], ow = dy.shape[3];

    weight.ensure_grad();
    bias.ensure_grad();
    Tensor dx(x.shape);
    for (int b = 0; b < batch; ++b) {
        const double* xb = x.v.data() + static_cast<std::size_t>(b) * ch * h * w;
        double* dxb = dx.v.data() + static_cast<std::size_t>(b) * ch * h * w;
        const double* dyb = dy.v.data() + static_cast<std::size_t>(b) * out_channels * oh * ow;
        for (int oc = 0; oc < out_channels; ++oc) {
            const double* dplane = dyb + static_cast<std::size_t>(oc) * oh * ow;
            const std::size_t wbase = static_cast<std::size_t>(oc) * in_channels * kKernel * kKernel;
            for (int oy = 0; oy < oh; ++oy) {
                for (int ox = 0; ox < ow; ++ox) {
                    const double dval = dplane[oy * ow + ox];
                    if (dval == 0.0) continue;
                    bias.g[oc] += dval;
                    for (int ic = 0; ic < in_channels; ++ic) {
                        const double* xplane = xb + static_cast<std::size_t>(ic) * h * w;
                        double* dxplane = dxb + static_cast<std::size_t>(ic) * h * w;
                        const std::size_t wic = wbase + static_cast<std::size_t>(ic) * kKernel * kKernel;
                        for (int ky = 0; ky < kKernel; ++ky) {
                            const int iy = oy - kPad + ky;
                            if (iy < 0 || iy >= h) continue;
                            for (int kx = 0; kx < kKernel; ++kx) {
                                const int ix = ox - kPad + kx;
                                if (ix < 0 || ix >= w) continue;
                                weight.g[wic + ky * kKernel + kx] += dval * xplane[iy * w + ix];
                                dxplane[iy * w + ix] += dval * weight.v[wic + ky * kKernel + kx];
                            }
                        }
                    }
                }
            }
        }
    }
    return dx;
}

BatchNorm2d::BatchNorm2d(int ch) : channels(ch) {
    gamma = Tensor({ch});
    beta = Tensor({ch});
    for (double& g : gamma.v) g = 1.0;
    gamma.ensure_grad();
    beta.ensure_grad();
    running_mean.assign(ch, 0.0);
    running_var.assign(ch, 1.0);
}

Tensor BatchNorm2d::forward(const Tensor& x, bool train) {
    check_shape(x, 4, "batchnorm2d");
    const int batch = x.shape[0], ch = x.shape[1], h = x.shape[2], w = x.shape[3];
    if (ch != channels) throw numerical_error("batchnorm2d: channel mismatch");
    const int plane = h * w;
    const int count = batch * plane;

    cached_shape_ = x.shape;
    cached_train_ = train;
    cached_inv_std_.assign(ch, 0.0);
    Tensor y(x.shape);
    cached_xhat_ = Tensor(x.shape);

    for (int c = 0; c < ch; ++c) {
        double mean, var;
        if (train) {
            double sum = 0.0, sq = 0.0;
            for (int b = 0; b < batch; ++b) {
                const double* p = x.v.data() + (static_cast<std::size_t>(b) * ch + c) * plane;
                for (int i = 0; i < plane; ++i) {
                    sum += p[i];
                    sq += p[i] * p[i];
                }
            }
            mean = sum / count;
            var = sq / count - mean * mean;
            if (var < 0.0) var = 0.0;
            const double unbiased = count > 1 ? var * count / (count - 1.0) : var;
            running_mean[c] = (1.0 - momentum) * running_mean[c] + momentum * mean;
            running_var[c] = (1.0 - momentum) * running_var[c] + momentum * unbiased;
        } else {
            mean = running_mean[c];
            var = running_var[c];
        }
        const double inv_std = 1.0 / std::sqrt(var + eps);
        cached_inv_std_[c] = inv_std;
        for (int b = 0; b < batch; ++b) {
            const double* p = x.v.data() + (static_cast<std::size_t>(b) * ch + c) * plane;
            double* xh = cached_xhat_.v.data() + (static_cast<std::size_t>(b) * ch + c) * plane;
            double* yp = y.v.data() + (static_cast<std::size_t>(b) * ch + c) * plane;
            for (int i = 0; i < plane; ++i) {
                xh[i] = (p[i] - mean) * inv_std;
                yp[i] = gamma.v[c] * xh[i] + beta.v[c];
            }
        }
    }
    return y;
}

Tensor BatchNorm2d::backward(const Tensor& dy) {
    const int batch = cached_shape_[0], ch = cached_shape_[1];
    const int plane = cached_shape_[2] * cached_shape_[3];
    const int count = batch * plane;

    gamma.ensure_grad();
    beta.ensure_grad();
    Tensor dx(cached_shape_);
    for (int c = 0; c < ch; ++c) {
        double sum_dy = 0.0, sum_dy_xhat = 0.0;
        for (int b = 0; b < batch; ++b) {
            const double* d = dy.v.data() + (static_cast<std::size_t>(b) * ch + c) * plane;
            const double* xh = cached_xhat_.v.data() + (static_cast<std::size_t>(b) * ch + c) * plane;
            for (int i = 0; i < plane; ++i) {
                sum_dy += d[i];
                sum_dy_xhat += d[i] * xh[i];
            }
        }
        gamma.g[c] += sum_dy_xhat;
        beta.g[c] += sum_dy;

        const double scale = gamma.v[c] * cached_inv_std_[c];
        for (int b = 0; b < batch; ++b) {
            const double* d = dy.v.data() + (static_cast<std::size_t>(b) * ch + c) * plane;
            const double* xh = cached_xhat_.v.data() + (static_cast<std::size_t>(b) * ch + c) * plane;
            double* dxp = dx.v.data() + (static_cast<std::size_t>(b) * ch + c) * plane;
            if (cached_train_) {
                for (int i = 0; i < plane; ++i)
                    dxp[i] = scale * (d[i] - sum_dy / count - xh[i] * sum_dy_xhat / count);
            } else {
                for (int i = 0; i < plane; ++i) dxp[i] = scale * d[i];
            }
        }
    }
    return dx;
}

BatchNorm1d::BatchNorm1d(int n) : features(n) {
    gamma = Tensor({n});
    beta = Tensor({n});
    for (double& g : gamma.v) g = 1.0;
    gamma.ensure_grad();
    beta.ensure_grad();
    running_mean.assign(n, 0.0);
    running_var.assign(n, 1.0);
}

Tensor BatchNorm1d::forward(const Tensor& x, bool train) {
    check_shape(x, 2, "batchnorm1d");
    const int batch = x.shape[0], n = x.shape[1];
    if (n != features) throw numerical_error("batchnorm1d: feature mismatch");

    cached_batch_ = batch;
    cached_train_ = train;
    cached_inv_std_.assign(n, 0.0);
    cached_xhat_ = Tensor(x.shape);
    Tensor y(x.shape);

    for (int j = 0; j < n; ++j) {
        double mean, var;
        if (train) {
            double sum = 0.0, sq = 0.0;
            for (int b = 0; b < batch; ++b) {
                const double xv = x.v[static_cast<std::size_t>(b) * n + j];
                sum += xv;
                sq += xv * xv;
            }
            mean = sum / batch;
            var = sq / batch - mean * mean;
            if (var < 0.0) var = 0.0;
            const double unbiased = batch > 1 ? var * batch / (batch - 1.0) : var;
            running_mean[j] = (1.0 - momentum) * running_mean[j] + momentum * mean;
            running_var[j] = (1.0 - momentum) * running_var[j] + momentum * unbiased;
        } else {
            mean = running_mean[j];
            var = running_var[j];
        }
        const double inv_std = 1.0 / std::sqrt(var + eps);
        cached_inv_std_[j] = inv_std;
        for (int b = 0; b < batch; ++b) {
            const std::size_t at = static_cast<std::size_t>(b) * n + j;
            cached_xhat_.v[at] = (x.v[at] - mean) * inv_std;
            y.v[at] = gamma.v[j] * cached_xhat_.v[at] + beta.v[j];
        }
    }
    return y;
}

Tensor BatchNorm1d::backward(const Tensor& dy) {
    const int batch = cached_batch_, n = features;
    gamma.ensure_grad();
    beta.ensure_grad();
    Tensor dx({batch, n});
    for (int j = 0; j < n; ++j) {
        double sum_dy = 0.0, sum_dy_xhat = 0.0;
        for (int b = 0; b < batch; ++b) {
            const std::size_t at = static_cast<std::size_t>(b) * n + j;
            sum_dy += dy.v[at];
            sum_dy_xhat += dy.v[at] * cached_xhat_.v[at];
        }
        gamma.g[j] += sum_dy_xhat;
        beta.g[j] += sum_dy;
        const double scale = gamma.v[j] * cached_inv_std_[j];
        for (int b = 0; b < batch; ++b) {
            const std::size_t at = static_cast<std::size_t>(b) * n + j;
            if (cached_train_) {
                dx.v[at] = scale * (dy.v[at] - sum_dy / batch -
                                    cached_xhat_.v[at] * sum_dy_xhat / batch);
            } else {
                dx.v[at] = scale * dy.v[at];
            }
        }
    }
    return dx;
}

Tensor ReLU::forward(const Tensor& x) {
    Tensor y = x;
    cached_active_.assign(x.v.size(), 0);
    for (std::size_t i = 0; i < y.v.size(); ++i) {
        if (y.v[i] > 0.0) cached_active_[i] = 1;
        else y.v[i] = 0.0;
    }
    return y;
}

Tensor ReLU::backward(const Tensor& dy) {
    Tensor dx = dy;
    for (std::size_t i = 0; i < dx.v.size(); ++i)
        if (!cached_active_[i]) dx.v[i] = 0.0;
    return dx;
}

Tensor Dropout::forward(const Tensor& x, bool train, Rng& rng) {
    cached_train_ = train;
    if (!train) return x;
    Tensor y = x;
    mask_.assign(x.v.size(), 0);
    const double keep = 1.0 - p;
    for (std::size_t i = 0; i < y.v.size(); ++i) {
        if (rng.uniform() < keep) {
            mask_[i] = 1;
            y.v[i] /= keep;
        } else {
            y.v[i] = 0.0;
        }
    }
    return y;
}

Tensor Dropout::backward(const Tensor& dy) {
    if (!cached_train_) return dy;
    Tensor dx = dy;
    const double keep = 1.0 - p;
    for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] = mask_[i] ? dx.v[i] / keep : 0.0;
    return dx;
}

Affine::Affine(int in, int out) : in_features(in), out_features(out) {
    weight = Tensor({out, in});
    bias = Tensor({out});
    weight.ensure_grad();
    bias.ensure_grad();
}

void Affine::init(Rng& rng) {
    for (double& w : weight.v) w = uniform_fan_in(rng, in_features);
    for (double& b : bias.v) b = uniform_fan_in(rng, in_features);
}

Tensor Affine::forward(const Tensor& x) {
    check_shape(x, 2, "affine");
    const int batch = x.shape[0];
    if (x.shape[1] != in_features) throw numerical_error("affine: input width mismatch");
    cached_input_ = x;
    Tensor y({batch, out_features});
    for (int b = 0; b < batch; ++b) {
        const double* xb = x.v.data() + static_cast<std::size_t>(b) * in_features;
        double* yb = y.v.data() + static_cast<std::size_t>(b) * out_features;
        for (int o = 0; o < out_features; ++o) {
            const double* wrow = weight.v.data() + static_cast<std::size_t>(o) * in_features;
            double acc = bias.v[o];
            for (int i = 0; i < in_features; ++i) acc += wrow[i] * xb[i];
            yb[o] = acc;
        }
    }
    return y;
}

Tensor Affine::backward(const Tensor& dy) {
    const int batch = cached_input_.shape[0];
    weight.ensure_grad();
    bias.ensure_grad();
    Tensor dx({batch, in_features});
    for (int b = 0; b < batch; ++b) {
        const double* xb = cached_input_.v.data() + static_cast<std::size_t>(b) * in_features;
        const double* dyb = dy.v.data() + static_cast<std::size_t>(b) * out_features;
        double* dxb = dx.v.data() + static_cast<std::size_t>(b) * in_features;
        for (int o = 0; o < out_features; ++o) {
            const double dval = dyb[o];
            if (dval == 0.0) continue;
            bias.g[o] += dval;
            double* wg = weight.g.data() + static_cast<std::size_t>(o) * in_features;
            const double* wrow = weight.v.data() + static_cast<std::size_t>(o) * in_features;
            for (int i = 0; i < in_features; ++i) {
                wg[i] += dval * xb[i];
                dxb[i] += dval * wrow[i];
            }
        }
    }
    return dx;
}

double bce_loss(const std::vector<double>& logits, const std::vector<int>& labels,
                std::vector<double>* dlogits) {
    if (logits.size() != labels.size()) throw numerical_error("bce_loss: size mismatch");
    if (logits.empty()) throw numerical_error("bce_loss: empty batch");
    const double inv_n = 1.0 / static_cast<double>(logits.size());
    if (dlogits) dlogits->assign(logits.size(), 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double z = logits[i];
        const double y = labels[i];
        // max(z,0) - z*y + log(1 + exp(-|z|))
        loss += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
        if (dlogits) {
            const double sigmoid = 1.0 / (1.0 + std::exp(-z));
            (*dlogits)[i] = (sigmoid - y) * inv_n;
        }
    }
    return loss * inv_n;
}

} // namespace wavpers
