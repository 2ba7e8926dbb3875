#ifndef WAVPERS_JACOBI_HPP
#define WAVPERS_JACOBI_HPP

#include <Eigen/Core>

namespace wavpers {

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Deterministic for a fixed input: eigenvalues ascending with stable tie
/// order, each eigenvector's largest-magnitude entry made positive.
///
/// Stops when the off-diagonal Frobenius norm drops below
/// tol * max(1, ||A||_F); throws numerical_error after max_sweeps.
struct SymmetricEigen {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors; // column i pairs with eigenvalues[i]
};

SymmetricEigen jacobi_eigendecompose(const Eigen::MatrixXd& a, double tol = 1e-12,
                                     int max_sweeps = 100);

} // namespace wavpers

#endif // WAVPERS_JACOBI_HPP
