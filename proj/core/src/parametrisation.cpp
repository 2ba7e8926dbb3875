#include "wavpers/parametrisation.hpp"

#include <cmath>

#include "wavpers/errors.hpp"
#include "wavpers/jacobi.hpp"

namespace wavpers {

namespace {

constexpr double kRankCutoff = 1e-8; // relative to the largest singular value

/// SVD of a tall matrix via the Gram matrix F^T F (m is small here).
void compute_svd(Parametrisation& p) {
    const Eigen::MatrixXd gram = p.matrix.transpose() * p.matrix;
    SymmetricEigen eig = jacobi_eigendecompose(gram);

    const int m = static_cast<int>(gram.rows());
    // descending singular values
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = m - 1 - i;

    const double sigma_max = std::sqrt(std::max(0.0, eig.eigenvalues[m - 1]));
    if (sigma_max <= 0.0)
        throw numerical_error("degenerate wavelet basis: parametrisation matrix is zero");

    int rank = 0;
    for (int i : order) {
        const double sigma = std::sqrt(std::max(0.0, eig.eigenvalues[i]));
        if (sigma > kRankCutoff * sigma_max) ++rank;
    }

    p.rank = rank;
    p.singular_values.resize(rank);
    p.right_vectors.resize(m, rank);
    p.left_vectors.resize(p.matrix.rows(), rank);
    for (int k = 0; k < rank; ++k) {
        const int i = order[k];
        const double sigma = std::sqrt(std::max(0.0, eig.eigenvalues[i]));
        p.singular_values[k] = sigma;
        p.right_vectors.col(k) = eig.eigenvectors.col(i);
        p.left_vectors.col(k) = p.matrix * eig.eigenvectors.col(i) / sigma;
    }
}

} // namespace

Eigen::VectorXd Parametrisation::apply(const Eigen::VectorXd& theta) const {
    if (theta.size() != matrix.cols())
        throw numerical_error("apply: coefficient dimension mismatch");
    return matrix * theta;
}

Eigen::VectorXd Parametrisation::apply_graph(int i, const Eigen::VectorXd& theta) const {
    if (theta.size() != matrix.cols())
        throw numerical_error("apply_graph: coefficient dimension mismatch");
    return matrix.middleRows(row_offsets[i], graph_sizes[i]) * theta;
}

Eigen::VectorXd Parametrisation::pullback_gradient(const Eigen::VectorXd& grad_f) const {
    if (grad_f.size() != matrix.rows())
        throw numerical_error("pullback_gradient: stacked dimension mismatch");
    return matrix.transpose() * grad_f;
}

Eigen::VectorXd Parametrisation::pullback_gradient_graph(int i,
                                                         const Eigen::VectorXd& grad_fi) const {
    if (grad_fi.size() != graph_sizes[i])
        throw numerical_error("pullback_gradient_graph: block dimension mismatch");
    return matrix.middleRows(row_offsets[i], graph_sizes[i]).transpose() * grad_fi;
}

Parametrisation build_parametrisation(const Dataset& d, const std::vector<SpectralData>& spectra,
                                      const WaveletBasis& b) {
    if (static_cast<int>(spectra.size()) != d.size())
        throw numerical_error("build_parametrisation: spectra count does not match dataset");

    Parametrisation p;
    p.basis = b;
    p.row_offsets = disjoint_union_offsets(d);
    p.graph_sizes.reserve(d.size());
    for (const auto& g : d.graphs) p.graph_sizes.push_back(g.n_vertices);

    p.matrix.resize(d.total_vertices(), b.size());
    for (int j = 0; j < b.size(); ++j) {
        const Wavelet hj = [&b, j](double x) { return b.evaluate(j, x); };
        for (int i = 0; i < d.size(); ++i)
            p.matrix.block(p.row_offsets[i], j, p.graph_sizes[i], 1) =
                wavelet_signature(spectra[i], hj);
    }

    compute_svd(p);
    return p;
}

Parametrisation recondition(const Parametrisation& p) {
    if (p.rank < 1) throw numerical_error("recondition: parametrisation has rank zero");
    const int r = p.rank;

    // u_k = F v_k / sigma_k loses orthonormality near the rank cutoff, so
    // re-orthonormalise (QR by modified Gram-Schmidt, two passes) and fold
    // the mixing into the basis coefficients; in exact arithmetic R = I.
    Eigen::MatrixXd q = p.left_vectors;
    Eigen::MatrixXd r_mat = Eigen::MatrixXd::Zero(r, r);
    for (int k = 0; k < r; ++k) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < k; ++i) {
                const double proj = q.col(i).dot(q.col(k));
                r_mat(i, k) += proj;
                q.col(k) -= proj * q.col(i);
            }
        }
        r_mat(k, k) = q.col(k).norm();
        if (r_mat(k, k) <= 0.0)
            throw numerical_error("recondition: left vectors are numerically dependent");
        q.col(k) /= r_mat(k, k);
    }

    // columns of (V diag(1/sigma) R^{-1}) express the new functions over the
    // raw basis; back-substitute against the upper-triangular R
    Eigen::MatrixXd mix(p.basis.size(), r);
    for (int k = 0; k < r; ++k) {
        Eigen::VectorXd col = p.right_vectors.col(k) / p.singular_values[k];
        for (int i = 0; i < k; ++i) col -= r_mat(i, k) * mix.col(i);
        mix.col(k) = col / r_mat(k, k);
    }

    Parametrisation out;
    out.basis = p.basis.reparametrise(mix.transpose());
    out.matrix = std::move(q);
    out.row_offsets = p.row_offsets;
    out.graph_sizes = p.graph_sizes;
    compute_svd(out);
    out.reconditioned = true;
    return out;
}

Eigen::VectorXd least_squares_init(const Parametrisation& p, const Eigen::VectorXd& target) {
    if (!p.reconditioned)
        throw numerical_error("least_squares_init requires a reconditioned parametrisation");
    if (target.size() != p.matrix.rows())
        throw numerical_error("least_squares_init: target dimension mismatch");
    return p.matrix.transpose() * target;
}

Eigen::VectorXd stacked_signature(const std::vector<SpectralData>& spectra, const Wavelet& g) {
    int total = 0;
    for (const auto& s : spectra) total += s.n();
    Eigen::VectorXd out(total);
    int at = 0;
    for (const auto& s : spectra) {
        out.segment(at, s.n()) = wavelet_signature(s, g);
        at += s.n();
    }
    return out;
}

} // namespace wavpers
