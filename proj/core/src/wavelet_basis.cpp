#include "wavpers/wavelet_basis.hpp"

#include <cmath>

#include "wavpers/errors.hpp"

namespace wavpers {

namespace {

double clamp02(double x) { return std::min(2.0, std::max(0.0, x)); }

} // namespace

double WaveletBasis::evaluate(int j, double x) const {
    x = clamp02(x);
    switch (kind_) {
    case Kind::chebyshev: {
        const double y = std::min(1.0, std::max(-1.0, x - 1.0));
        return std::cos(chebyshev_degrees_[j] * std::acos(y));
    }
    case Kind::rbf_inverse_multiquadric: {
        const double r = (x - centroids_[j]) / width_;
        return 1.0 / std::sqrt(r * r + 1.0);
    }
    case Kind::derived: {
        double acc = 0.0;
        for (int i = 0; i < base_->size(); ++i)
            acc += coeffs_(j, i) * base_->evaluate(i, x);
        return acc;
    }
    }
    return 0.0;
}

Eigen::VectorXd WaveletBasis::evaluate_all(double x) const {
    Eigen::VectorXd out(size_);
    for (int j = 0; j < size_; ++j) out[j] = evaluate(j, x);
    return out;
}

Wavelet WaveletBasis::combine(const Eigen::VectorXd& theta) const {
    if (theta.size() != size_)
        throw numerical_error("wavelet coefficients have wrong dimension");
    // capture by value so the wavelet outlives the caller's theta
    WaveletBasis copy = *this;
    return [copy, theta](double x) {
        double acc = 0.0;
        for (int j = 0; j < copy.size(); ++j) acc += theta[j] * copy.evaluate(j, x);
        return acc;
    };
}

WaveletBasis WaveletBasis::reparametrise(const Eigen::MatrixXd& coeffs) const {
    if (coeffs.cols() != size_)
        throw numerical_error("reparametrisation coefficient matrix has wrong width");
    WaveletBasis out;
    out.kind_ = Kind::derived;
    out.size_ = static_cast<int>(coeffs.rows());
    out.base_ = std::make_shared<WaveletBasis>(*this);
    out.coeffs_ = coeffs;
    return out;
}

std::string WaveletBasis::kind_name() const {
    switch (kind_) {
    case Kind::chebyshev: return "chebyshev";
    case Kind::rbf_inverse_multiquadric: return "rbf";
    case Kind::derived: return "derived-" + base_->kind_name();
    }
    return "?";
}

WaveletBasis WaveletBasis::chebyshev(int m) {
    if (m < 1) throw numerical_error("chebyshev basis needs at least one function");
    WaveletBasis b;
    b.kind_ = Kind::chebyshev;
    b.size_ = m;
    b.chebyshev_degrees_.push_back(0);
    for (int n = 2; static_cast<int>(b.chebyshev_degrees_.size()) < m; ++n)
        b.chebyshev_degrees_.push_back(n);
    return b;
}

WaveletBasis WaveletBasis::rbf() {
    WaveletBasis b;
    b.kind_ = Kind::rbf_inverse_multiquadric;
    b.size_ = 12;
    b.width_ = 2.0 / 9.0;
    for (int j = 0; j < 12; ++j) b.centroids_.push_back(2.0 * (j - 1) / 9.0);
    return b;
}

WaveletBasis chebyshev_basis(int m) { return WaveletBasis::chebyshev(m); }

WaveletBasis rbf_basis() { return WaveletBasis::rbf(); }

} // namespace wavpers
