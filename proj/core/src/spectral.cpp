#include "wavpers/spectral.hpp"

#include <cmath>

#include "wavpers/jacobi.hpp"

namespace wavpers {

Eigen::MatrixXd normalised_laplacian(const Graph& g) {
    const int n = g.n_vertices;
    Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
    const auto deg = g.degrees();
    for (auto [u, v] : g.edges) {
        const double w = -1.0 / std::sqrt(static_cast<double>(deg[u]) * deg[v]);
        l(u, v) = w;
        l(v, u) = w;
    }
    return l;
}

SpectralData eigendecompose(const Eigen::MatrixXd& laplacian) {
    SymmetricEigen e = jacobi_eigendecompose(laplacian);
    return SpectralData{std::move(e.eigenvalues), std::move(e.eigenvectors)};
}

Eigen::VectorXd wavelet_signature(const SpectralData& s, const Wavelet& g) {
    const int n = s.n();
    Eigen::VectorXd gvals(n);
    for (int i = 0; i < n; ++i) {
        double x = s.eigenvalues[i];
        x = std::min(2.0, std::max(0.0, x));
        gvals[i] = g(x);
    }
    return s.eigenvectors.array().square().matrix() * gvals;
}

Eigen::VectorXd heat_kernel_signature(const SpectralData& s, double t) {
    return wavelet_signature(s, [t](double x) { return std::exp(-t * x); });
}

} // namespace wavpers
