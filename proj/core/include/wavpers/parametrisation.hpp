#ifndef WAVPERS_PARAMETRISATION_HPP
#define WAVPERS_PARAMETRISATION_HPP

#include <vector>

#include <Eigen/Core>

#include "wavpers/graph.hpp"
#include "wavpers/spectral.hpp"
#include "wavpers/wavelet_basis.hpp"

namespace wavpers {

/// The linear map from wavelet coefficients to the stacked vertex function
/// over a dataset's disjoint union: column j of `matrix` is the stacked
/// signature of basis function j, together with its singular value
/// decomposition.
struct Parametrisation {
    WaveletBasis basis;
    Eigen::MatrixXd matrix;          // (sum of |V_i|) x m
    std::vector<int> row_offsets;    // per-graph first row
    std::vector<int> graph_sizes;    // per-graph |V_i|

    Eigen::VectorXd singular_values; // descending, length = rank
    Eigen::MatrixXd left_vectors;    // rows x rank, orthonormal columns u_k
    Eigen::MatrixXd right_vectors;   // m x rank, orthonormal columns v_k
    int rank = 0;
    bool reconditioned = false;

    int n_graphs() const { return static_cast<int>(graph_sizes.size()); }
    int coefficient_dim() const { return static_cast<int>(matrix.cols()); }

    /// F theta over the whole disjoint union.
    Eigen::VectorXd apply(const Eigen::VectorXd& theta) const;

    /// Block of F theta belonging to graph i.
    Eigen::VectorXd apply_graph(int i, const Eigen::VectorXd& theta) const;

    /// F^T grad_f: pulls a stacked vertex-function gradient back to
    /// coefficient space.
    Eigen::VectorXd pullback_gradient(const Eigen::VectorXd& grad_f) const;

    /// F_i^T grad_{f_i} for a single graph's block.
    Eigen::VectorXd pullback_gradient_graph(int i, const Eigen::VectorXd& grad_fi) const;
};

/// Builds F from per-graph spectral data and a basis; computes the SVD via
/// the m x m Gram matrix. Throws numerical_error when F is identically zero.
Parametrisation build_parametrisation(const Dataset& d, const std::vector<SpectralData>& spectra,
                                      const WaveletBasis& b);

/// New basis h'_k = (1/sigma_k) sum_j (v_k)_j h_j; the resulting map has
/// orthonormal columns u_k, hence unit singular values.
Parametrisation recondition(const Parametrisation& p);

/// Least-squares fit of a reconditioned parametrisation to a stacked target:
/// with orthonormal columns this is the projection theta'_k = <u_k, target>.
Eigen::VectorXd least_squares_init(const Parametrisation& p, const Eigen::VectorXd& target);

/// Stacks wavelet_signature(spectra[i], g) over all graphs.
Eigen::VectorXd stacked_signature(const std::vector<SpectralData>& spectra, const Wavelet& g);

} // namespace wavpers

#endif // WAVPERS_PARAMETRISATION_HPP
