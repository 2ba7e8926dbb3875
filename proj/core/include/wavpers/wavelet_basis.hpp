#ifndef WAVPERS_WAVELET_BASIS_HPP
#define WAVPERS_WAVELET_BASIS_HPP

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wavpers/spectral.hpp"

namespace wavpers {

/// A finite family h_1..h_m of functions on [0,2] used to parametrise
/// wavelets as linear combinations g_theta = sum_j theta_j h_j.
class WaveletBasis {
public:
    enum class Kind { chebyshev, rbf_inverse_multiquadric, derived };

    WaveletBasis() = default; // empty placeholder; use the factories

    Kind kind() const { return kind_; }
    int size() const { return size_; }

    /// h_j(x); x is clamped to [0,2].
    double evaluate(int j, double x) const;

    Eigen::VectorXd evaluate_all(double x) const;

    /// g_theta as a callable wavelet; theta must have size() entries.
    Wavelet combine(const Eigen::VectorXd& theta) const;

    /// Linear reparametrisation: function k of the result is
    /// sum_j coeffs(k, j) * h_j. Used by the SVD reconditioning.
    WaveletBasis reparametrise(const Eigen::MatrixXd& coeffs) const;

    std::string kind_name() const;

    static WaveletBasis chebyshev(int m);
    static WaveletBasis rbf();

private:
    Kind kind_ = Kind::chebyshev;
    int size_ = 0;
    std::vector<int> chebyshev_degrees_;   // chebyshev
    std::vector<double> centroids_;        // rbf
    double width_ = 0.0;                   // rbf
    std::shared_ptr<const WaveletBasis> base_; // derived
    Eigen::MatrixXd coeffs_;                   // derived, size_ x base->size()
};

/// m Chebyshev polynomials T_n(x-1) with n in {0, 2, 3, ...}; degree one is
/// skipped because its signature vanishes on simple graphs.
WaveletBasis chebyshev_basis(int m);

/// Twelve inverse multiquadric bumps, centroids 2(j-1)/9 for j = 0..11,
/// width 2/9.
WaveletBasis rbf_basis();

} // namespace wavpers

#endif // WAVPERS_WAVELET_BASIS_HPP
