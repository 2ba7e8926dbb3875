#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pipeline_fixture.hpp"
#include "test_util.hpp"
#include "wavpers/errors.hpp"
#include "wavpers/layers.hpp"
#include "wavpers/model.hpp"

using namespace wavpers;
using wavpers::testing::PipelineFixture;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double scale = 1.0) {
    Tensor t(std::move(shape));
    for (double& v : t.v) v = rng.normal() * scale;
    return t;
}

/// Central finite differences of a scalar functional against an analytic
/// gradient, at relative tolerance `rel`.
template <typename Forward>
void check_gradient(std::vector<double>& param, const std::vector<double>& analytic,
                    Forward&& forward, double rel = 1e-4, double h = 1e-6) {
    REQUIRE(param.size() == analytic.size());
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double keep = param[i];
        param[i] = keep + h;
        const double up = forward();
        param[i] = keep - h;
        const double down = forward();
        param[i] = keep;
        const double fd = (up - down) / (2.0 * h);
        const double denom = std::max({1.0, std::abs(fd), std::abs(analytic[i])});
        CHECK(std::abs(fd - analytic[i]) <= rel * denom);
    }
}

} // namespace

TEST_CASE("bce loss values and gradient") {
    std::vector<double> dl;
    CHECK(bce_loss({0.0}, {1}, &dl) == doctest::Approx(std::log(2.0)));
    CHECK(bce_loss({0.0}, {0}) == doctest::Approx(std::log(2.0)));
    CHECK(bce_loss({50.0}, {1}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bce_loss({-50.0}, {0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::isfinite(bce_loss({700.0}, {0})));

    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> logits = {rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
        std::vector<int> labels = {static_cast<int>(rng.uniform_index(2)),
                                   static_cast<int>(rng.uniform_index(2))};
        std::vector<double> grad;
        bce_loss(logits, labels, &grad);
        check_gradient(
            logits, grad, [&] { return bce_loss(logits, labels); }, 1e-6);
        // closed form: (sigmoid - y) / batch
        for (int i = 0; i < 2; ++i) {
            const double sig = 1.0 / (1.0 + std::exp(-logits[i]));
            CHECK(grad[i] == doctest::Approx((sig - labels[i]) / 2.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("affine layer gradients") {
    Rng rng(5);
    Affine layer(4, 3);
    layer.init(rng);
    Tensor x = random_tensor({2, 4}, rng);
    std::vector<double> c(6);
    for (double& v : c) v = rng.normal();

    auto forward = [&] {
        Affine probe = layer;
        const Tensor y = probe.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < y.v.size(); ++i) s += c[i] * y.v[i];
        return s;
    };

    Tensor dy({2, 3});
    dy.v = c;
    layer.weight.zero_grad();
    layer.bias.zero_grad();
    layer.forward(x);
    const Tensor dx = layer.backward(dy);

    check_gradient(layer.weight.v, layer.weight.g, forward);
    check_gradient(layer.bias.v, layer.bias.g, forward);
    check_gradient(x.v, dx.v, forward);
}

TEST_CASE("conv layer gradients") {
    Rng rng(7);
    Conv2d layer(2, 3);
    layer.init(rng);
    Tensor x = random_tensor({2, 2, 5, 5}, rng);
    std::vector<double> c(2 * 3 * 6 * 6);
    for (double& v : c) v = rng.normal();

    auto forward = [&] {
        Conv2d probe = layer;
        const Tensor y = probe.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < y.v.size(); ++i) s += c[i] * y.v[i];
        return s;
    };

    Tensor dy({2, 3, 6, 6});
    dy.v = c;
    layer.weight.zero_grad();
    layer.bias.zero_grad();
    layer.forward(x);
    const Tensor dx = layer.backward(dy);

    check_gradient(layer.weight.v, layer.weight.g, forward);
    check_gradient(layer.bias.v, layer.bias.g, forward);
    check_gradient(x.v, dx.v, forward);
}

TEST_CASE("batchnorm2d train-mode statistics and gradients") {
    Rng rng(11);
    BatchNorm2d bn(3);
    Tensor x = random_tensor({4, 3, 5, 5}, rng, 2.0);

    SUBCASE("normalised output has zero mean and unit variance per channel") {
        BatchNorm2d probe(3); // gamma 1, beta 0
        const Tensor y = probe.forward(x, true);
        for (int ch = 0; ch < 3; ++ch) {
            double sum = 0.0, sq = 0.0;
            int count = 0;
            for (int b = 0; b < 4; ++b)
                for (int i = 0; i < 25; ++i) {
                    const double v = y.v[(b * 3 + ch) * 25 + i];
                    sum += v;
                    sq += v * v;
                    ++count;
                }
            const double mean = sum / count;
            CHECK(std::abs(mean) < 1e-6);
            CHECK(std::abs(sq / count - mean * mean - 1.0) < 1e-4);
        }
    }

    SUBCASE("gradients") {
        for (double& g : bn.gamma.v) g = 1.3;
        for (double& b : bn.beta.v) b = -0.4;
        std::vector<double> c(x.v.size());
        for (double& v : c) v = rng.normal();

        auto forward = [&] {
            BatchNorm2d probe = bn;
            const Tensor y = probe.forward(x, true);
            double s = 0.0;
            for (std::size_t i = 0; i < y.v.size(); ++i) s += c[i] * y.v[i];
            return s;
        };

        Tensor dy(x.shape);
        dy.v = c;
        bn.gamma.zero_grad();
        bn.beta.zero_grad();
        bn.forward(x, true);
        const Tensor dx = bn.backward(dy);
        check_gradient(bn.gamma.v, bn.gamma.g, forward, 2e-4);
        check_gradient(bn.beta.v, bn.beta.g, forward, 2e-4);
        check_gradient(x.v, dx.v, forward, 2e-4);
    }

    SUBCASE("eval mode uses running statistics") {
        BatchNorm2d probe(3);
        probe.forward(x, true); // update running stats once
        Tensor single = random_tensor({1, 3, 5, 5}, rng);
        const Tensor y1 = probe.forward(single, false);
        const Tensor y2 = probe.forward(single, false);
        for (std::size_t i = 0; i < y1.v.size(); ++i) CHECK(y1.v[i] == y2.v[i]);
    }
}

TEST_CASE("batchnorm1d gradients") {
    Rng rng(13);
    BatchNorm1d bn(6);
    for (double& g : bn.gamma.v) g = 0.8;
    Tensor x = random_tensor({5, 6}, rng);
    std::vector<double> c(x.v.size());
    for (double& v : c) v = rng.normal();

    auto forward = [&] {
        BatchNorm1d probe = bn;
        const Tensor y = probe.forward(x, true);
        double s = 0.0;
        for (std::size_t i = 0; i < y.v.size(); ++i) s += c[i] * y.v[i];
        return s;
    };

    Tensor dy(x.shape);
    dy.v = c;
    bn.gamma.zero_grad();
    bn.beta.zero_grad();
    bn.forward(x, true);
    const Tensor dx = bn.backward(dy);
    check_gradient(bn.gamma.v, bn.gamma.g, forward, 2e-4);
    check_gradient(bn.beta.v, bn.beta.g, forward, 2e-4);
    check_gradient(x.v, dx.v, forward, 2e-4);
}

TEST_CASE("relu gradients away from the kink") {
    Rng rng(17);
    ReLU relu;
    Tensor x = random_tensor({3, 7}, rng);
    for (double& v : x.v)
        if (std::abs(v) < 1e-3) v = 0.5; // keep clear of the kink
    std::vector<double> c(x.v.size());
    for (double& v : c) v = rng.normal();

    auto forward = [&] {
        ReLU probe;
        const Tensor y = probe.forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < y.v.size(); ++i) s += c[i] * y.v[i];
        return s;
    };

    Tensor dy(x.shape);
    dy.v = c;
    relu.forward(x);
    const Tensor dx = relu.backward(dy);
    check_gradient(x.v, dx.v, forward);
}

TEST_CASE("dropout modes") {
    Rng rng(19);
    Dropout dropout;
    Tensor x = random_tensor({1, 2000}, rng);
    for (double& v : x.v) v = std::abs(v) + 0.5;

    SUBCASE("eval mode is the identity") {
        Rng r2(1);
        const Tensor y = dropout.forward(x, false, r2);
        for (std::size_t i = 0; i < x.v.size(); ++i) CHECK(y.v[i] == x.v[i]);
    }

    SUBCASE("train mode zeroes about half and rescales survivors") {
        Rng r2(2);
        const Tensor y = dropout.forward(x, true, r2);
        int zeros = 0;
        for (std::size_t i = 0; i < x.v.size(); ++i) {
            if (y.v[i] == 0.0) ++zeros;
            else CHECK(y.v[i] == doctest::Approx(2.0 * x.v[i]));
        }
        CHECK(zeros > 800);
        CHECK(zeros < 1200);
    }

    SUBCASE("gradient with the mask held fixed") {
        Rng r2(3);
        dropout.forward(x, true, r2);
        const auto mask = dropout.last_mask();
        std::vector<double> c(x.v.size());
        for (double& v : c) v = rng.normal();
        Tensor dy(x.shape);
        dy.v = c;
        const Tensor dx = dropout.backward(dy);

        auto forward = [&] {
            double s = 0.0;
            for (std::size_t i = 0; i < x.v.size(); ++i)
                s += c[i] * (mask[i] ? x.v[i] / 0.5 : 0.0);
            return s;
        };
        check_gradient(x.v, dx.v, forward);
    }
}

TEST_CASE("cnn branch produces 484 features and the net concatenates to the head") {
    Rng rng(23);
    CnnBranch branch;
    branch.init(rng);
    Tensor images = random_tensor({2, 3, 20, 20}, rng);
    Rng dropout_rng(4);
    const Tensor out = branch.forward(images, true, dropout_rng);
    REQUIRE(out.shape == std::vector<int>{2, 484});

    ClassifierNet net(8);
    net.init(rng);
    CHECK(net.head.in_features == 484 + 484 + 8);
    Tensor feats = random_tensor({2, 8}, rng);
    Tensor stat = random_tensor({2, 3, 20, 20}, rng);
    Rng fwd_rng(5);
    const auto logits = net.forward(images, stat, feats, true, fwd_rng);
    CHECK(logits.size() == 2);
}

TEST_CASE("zero head gives logit zero and loss ln 2") {
    Rng rng(29);
    ClassifierNet net(8);
    net.init(rng);
    for (double& w : net.head.weight.v) w = 0.0;
    for (double& b : net.head.bias.v) b = 0.0;
    Tensor opt = random_tensor({3, 3, 20, 20}, rng);
    Tensor stat = random_tensor({3, 3, 20, 20}, rng);
    Tensor feats = random_tensor({3, 8}, rng);
    Rng fwd(6);
    const auto logits = net.forward(opt, stat, feats, false, fwd);
    for (double l : logits) CHECK(l == 0.0);
    CHECK(bce_loss(logits, {0, 1, 0}) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("eval-mode logits are unchanged when the batch is duplicated") {
    Rng rng(31);
    ClassifierNet net(8);
    net.init(rng);
    // populate running stats with one training pass
    Rng fwd(7);
    Tensor opt = random_tensor({4, 3, 20, 20}, rng);
    Tensor stat = random_tensor({4, 3, 20, 20}, rng);
    Tensor feats = random_tensor({4, 8}, rng);
    net.forward(opt, stat, feats, true, fwd);

    Tensor opt2({8, 3, 20, 20}), stat2({8, 3, 20, 20}), feats2({8, 8});
    for (int copy = 0; copy < 2; ++copy) {
        std::copy(opt.v.begin(), opt.v.end(), opt2.v.begin() + copy * opt.v.size());
        std::copy(stat.v.begin(), stat.v.end(), stat2.v.begin() + copy * stat.v.size());
        std::copy(feats.v.begin(), feats.v.end(), feats2.v.begin() + copy * feats.v.size());
    }
    const auto single = net.forward(opt, stat, feats, false, fwd);
    const auto doubled = net.forward(opt2, stat2, feats2, false, fwd);
    for (int i = 0; i < 4; ++i) {
        CHECK(doubled[i] == single[i]);
        CHECK(doubled[i + 4] == single[i]);
    }
}

TEST_CASE("adam leaves parameters alone under zero gradients") {
    Rng rng(37);
    Affine layer(3, 3);
    layer.init(rng);
    const std::vector<double> before = layer.weight.v;
    Adam adam(1e-3);
    layer.weight.zero_grad();
    layer.bias.zero_grad();
    adam.step({&layer.weight, &layer.bias});
    CHECK(layer.weight.v == before);
}

TEST_CASE("full model: wavelet freeze schedule") {
    PipelineFixture fx(4, 101);
    TrainSettings settings;
    settings.freeze_epoch = 50;
    GraphClassifier model(fx.inputs, settings, 42);

    const Eigen::VectorXd theta0 = model.theta();
    std::vector<int> batch = {0, 1, 2, 3};

    model.train_batch(batch);
    model.step(49);
    const Eigen::VectorXd theta_after_49 = model.theta();
    CHECK((theta_after_49 - theta0).cwiseAbs().maxCoeff() > 0.0);

    model.train_batch(batch);
    model.step(50);
    CHECK((model.theta() - theta_after_49).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("control mode never moves the wavelet") {
    PipelineFixture fx(4, 103);
    TrainSettings settings;
    settings.freeze_epoch = 0;
    GraphClassifier model(fx.inputs, settings, 43);
    const Eigen::VectorXd theta0 = model.theta();
    for (int epoch = 0; epoch < 5; ++epoch) {
        model.train_batch({0, 1, 2, 3});
        model.step(epoch);
    }
    CHECK((model.theta() - theta0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("static branch input is constant across wavelet updates") {
    PipelineFixture fx(4, 107);
    TrainSettings settings;
    GraphClassifier model(fx.inputs, settings, 44);
    const auto before = fx.inputs.static_images;
    for (int epoch = 0; epoch < 3; ++epoch) {
        model.train_batch({0, 1, 2});
        model.step(epoch);
    }
    CHECK(fx.inputs.static_images == before);
}

TEST_CASE("training losses and gradients match finite differences end to end") {
    PipelineFixture fx(3, 109);
    TrainSettings settings;
    GraphClassifier model(fx.inputs, settings, 45);
    const std::vector<int> batch = {0, 1, 2, 3, 4};
    std::vector<int> labels;
    for (int id : batch) labels.push_back(fx.dataset.labels[id]);

    const std::uint64_t rng_mark = 0xabcdef12345678ULL;
    auto loss_at = [&]() {
        model.rng().set_state(rng_mark);
        const auto logits = model.forward_logits(batch, true);
        return bce_loss(logits, labels);
    };

    model.net().zero_grad();
    model.rng().set_state(rng_mark);
    model.train_batch(batch);

    // wavelet coefficient gradient
    {
        Eigen::VectorXd& theta = model.theta();
        const Eigen::VectorXd analytic = model.theta_gradient();
        const double h = 1e-5;
        for (int k = 0; k < theta.size(); ++k) {
            const double keep = theta[k];
            theta[k] = keep + h;
            const double up = loss_at();
            theta[k] = keep - h;
            const double down = loss_at();
            theta[k] = keep;
            const double fd = (up - down) / (2.0 * h);
            const double denom = std::max({1.0, std::abs(fd), std::abs(analytic[k])});
            CHECK(std::abs(fd - analytic[k]) <= 1e-3 * denom);
        }
    }

    // a sample of network parameters from every block
    const auto params = model.net().parameters();
    Rng pick(47);
    for (Tensor* t : params) {
        const int checks = std::min<int>(4, t->numel());
        for (int c = 0; c < checks; ++c) {
            const std::size_t j = pick.uniform_index(t->v.size());
            const double keep = t->v[j];
            const double h = 1e-5;
            t->v[j] = keep + h;
            const double up = loss_at();
            t->v[j] = keep - h;
            const double down = loss_at();
            t->v[j] = keep;
            const double fd = (up - down) / (2.0 * h);
            const double analytic = t->g[j];
            const double denom = std::max({1.0, std::abs(fd), std::abs(analytic)});
            CHECK(std::abs(fd - analytic) <= 1e-3 * denom);
        }
    }
}

TEST_CASE("checkpoints resume the exact trajectory") {
    PipelineFixture fx(4, 113);
    TrainSettings settings;
    GraphClassifier model(fx.inputs, settings, 46);

    for (int epoch = 0; epoch < 3; ++epoch) {
        model.train_batch({0, 1, 2, 3});
        model.step(epoch);
    }
    std::stringstream saved;
    model.save_checkpoint(saved);

    auto continue_training = [&](GraphClassifier& m) {
        for (int epoch = 3; epoch < 6; ++epoch) {
            m.train_batch({1, 2, 3, 4});
            m.step(epoch);
        }
        return m.predict({0, 5, 6});
    };

    const auto direct = continue_training(model);

    GraphClassifier resumed(fx.inputs, settings, 999); // seed overwritten by the load
    std::stringstream reload(saved.str());
    resumed.load_checkpoint(reload);
    const auto replayed = continue_training(resumed);

    REQUIRE(direct.size() == replayed.size());
    for (std::size_t i = 0; i < direct.size(); ++i) CHECK(direct[i] == replayed[i]);
}

TEST_CASE("corrupt checkpoints are rejected") {
    PipelineFixture fx(2, 127);
    GraphClassifier model(fx.inputs, TrainSettings{}, 48);
    std::stringstream bad("not a checkpoint");
    CHECK_THROWS_AS(model.load_checkpoint(bad), data_error);
}
