#ifndef WAVPERS_PATH_SIGNATURE_HPP
#define WAVPERS_PATH_SIGNATURE_HPP

#include <array>
#include <vector>

#include <Eigen/Core>

#include "wavpers/spectral.hpp"

namespace wavpers {

/// Element of the tensor algebra over R^2 truncated at level 4; 31 dense
/// coefficients. Words over the two letters are indexed level-major: level
/// l starts at 2^l - 1, and within a level a word is read as a binary
/// number (first letter most significant).
struct TruncatedTensor {
    static constexpr int kLevels = 4;
    static constexpr int kSize = 31;

    std::array<double, kSize> c{};

    static TruncatedTensor one() {
        TruncatedTensor t;
        t.c[0] = 1.0;
        return t;
    }

    static constexpr int level_offset(int level) { return (1 << level) - 1; }
    static constexpr int level_size(int level) { return 1 << level; }

    double& at(int level, int word) { return c[level_offset(level) + word]; }
    double at(int level, int word) const { return c[level_offset(level) + word]; }
};

/// Truncated tensor product.
TruncatedTensor tensor_mul(const TruncatedTensor& x, const TruncatedTensor& y);

/// exp of the level-1 tensor (a, b): the signature of a single segment.
TruncatedTensor tensor_exp_segment(double a, double b);

/// Truncated log; requires scalar part 1.
TruncatedTensor tensor_log(const TruncatedTensor& x);

/// Signature of a 2D piecewise-linear path by Chen's relation: the product
/// of segment exponentials. A path with fewer than two points has the
/// identity signature.
TruncatedTensor signature(const std::vector<std::array<double, 2>>& path);

/// Projects a Lie element (a log signature) onto the Lyndon bracket basis.
/// Coordinates are level-major, lexicographic within a level:
/// [1], [2], [1,2], [1,[1,2]], [[1,2],2], [1,[1,[1,2]]], [1,[[1,2],2]],
/// [[[1,2],2],2] -- eight in total.
Eigen::VectorXd lyndon_coordinates(const TruncatedTensor& lie);

/// Laplacian eigenvalues as a 2D path.
enum class PathMode {
    delay, // (lambda_j, lambda_{j+1}), N-1 points
    time   // (lambda_j, 2(j-1)/(N-1)), N points
};

struct EigenPath {
    std::vector<std::array<double, 2>> points;
};

/// Needs at least two eigenvalues.
EigenPath eigen_path(const SpectralData& s, PathMode mode);

/// log of the path signature in Lyndon coordinates, R^8.
Eigen::VectorXd log_signature(const EigenPath& p);

} // namespace wavpers

#endif // WAVPERS_PATH_SIGNATURE_HPP
