#ifndef WAVPERS_TENSOR_HPP
#define WAVPERS_TENSOR_HPP

#include <vector>

namespace wavpers {

/// Dense row-major value/gradient pair. Gradients live alongside values so
/// optimisers can walk parameters uniformly.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> v;
    std::vector<double> g;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        v.assign(numel(), 0.0);
    }

    int numel() const {
        int n = 1;
        for (int d : shape) n *= d;
        return n;
    }

    void ensure_grad() {
        if (g.size() != v.size()) g.assign(v.size(), 0.0);
    }

    void zero_grad() { g.assign(v.size(), 0.0); }
};

} // namespace wavpers

#endif // WAVPERS_TENSOR_HPP
