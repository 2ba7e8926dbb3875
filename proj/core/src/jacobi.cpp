#include "wavpers/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "wavpers/errors.hpp"

namespace wavpers {

namespace {

double off_diagonal_frobenius(const Eigen::MatrixXd& a) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

SymmetricEigen jacobi_eigendecompose(const Eigen::MatrixXd& a, double tol, int max_sweeps) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw numerical_error("jacobi: matrix is not square");

    Eigen::MatrixXd m = 0.5 * (a + a.transpose()); // symmetrise round-off
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double threshold = tol * std::max(1.0, m.norm());

    if (n > 1) {
        bool converged = off_diagonal_frobenius(m) <= threshold;
        int sweep = 0;
        while (!converged) {
            if (sweep++ >= max_sweeps)
                throw numerical_error("jacobi: no convergence after " +
                                      std::to_string(max_sweeps) + " sweeps");
            for (Eigen::Index p = 0; p < n - 1; ++p) {
                for (Eigen::Index q = p + 1; q < n; ++q) {
                    const double apq = m(p, q);
                    if (apq == 0.0) continue;
                    const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;

                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double mkp = m(k, p);
                        const double mkq = m(k, q);
                        m(k, p) = c * mkp - s * mkq;
                        m(k, q) = s * mkp + c * mkq;
                    }
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double mpk = m(p, k);
                        const double mqk = m(q, k);
                        m(p, k) = c * mpk - s * mqk;
                        m(q, k) = s * mpk + c * mqk;
                    }
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double vkp = v(k, p);
                        const double vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
            converged = off_diagonal_frobenius(m) <= threshold;
        }
    }

    // ascending sort, stable in the original column order
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return m(i, i) < m(j, j); });

    SymmetricEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        out.eigenvalues[c] = m(order[c], order[c]);
        out.eigenvectors.col(c) = v.col(order[c]);
        // fix sign: largest-magnitude entry positive, first such entry wins
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            double mag = std::abs(out.eigenvectors(r, c));
            if (mag > best) {
                best = mag;
                arg = r;
            }
        }
        if (out.eigenvectors(arg, c) < 0.0) out.eigenvectors.col(c) = -out.eigenvectors.col(c);
    }
    return out;
}

} // namespace wavpers
