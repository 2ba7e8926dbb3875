#ifndef WAVPERS_SPECTRAL_HPP
#define WAVPERS_SPECTRAL_HPP

#include <functional>

#include <Eigen/Core>

#include "wavpers/graph.hpp"

namespace wavpers {

/// A real function on [0,2] evaluated at Laplacian eigenvalues.
using Wavelet = std::function<double(double)>;

/// Eigenvalues (ascending) and orthonormal eigenvectors of the normalised
/// Laplacian of one graph.
struct SpectralData {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors; // column i pairs with eigenvalues[i]

    int n() const { return static_cast<int>(eigenvalues.size()); }
};

/// Normalised Laplacian: unit diagonal, -1/sqrt(k_u k_v) on edges.
/// Isolated vertices keep the unit diagonal entry.
Eigen::MatrixXd normalised_laplacian(const Graph& g);

/// Jacobi eigendecomposition of a symmetric matrix, packaged as SpectralData.
SpectralData eigendecompose(const Eigen::MatrixXd& laplacian);

/// Vertex function W(g)_v = sum_i g(lambda_i) phi_i(v)^2. Eigenvalues are
/// clamped to [0,2] before evaluation to absorb round-off overshoot.
Eigen::VectorXd wavelet_signature(const SpectralData& s, const Wavelet& g);

/// Heat kernel signature W(e^{-t x}).
Eigen::VectorXd heat_kernel_signature(const SpectralData& s, double t);

} // namespace wavpers

#endif // WAVPERS_SPECTRAL_HPP
