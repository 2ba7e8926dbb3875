#include "wavpers/features.hpp"

#include <algorithm>
#include <cctype>

namespace wavpers {

Eigen::Vector4d hks_extrema(const SpectralData& s) {
    const Eigen::VectorXd fast = heat_kernel_signature(s, 10.0);
    const Eigen::VectorXd slow = heat_kernel_signature(s, 0.1);
    return {fast.maxCoeff(), fast.minCoeff(), slow.maxCoeff(), slow.minCoeff()};
}

DatasetProfile DatasetProfile::for_dataset(const std::string& name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    DatasetProfile p;
    if (upper.rfind("IMDB", 0) == 0) {
        p.path_mode = PathMode::time;
        p.include_hks_extrema = true;
    }
    return p;
}

Eigen::VectorXd feature_vector(const SpectralData& s, const DatasetProfile& profile) {
    Eigen::VectorXd out(profile.feature_dim());
    if (s.n() >= 2) {
        out.head(8) = log_signature(eigen_path(s, profile.path_mode));
    } else {
        out.head(8).setZero(); // one-vertex graph: constant path
    }
    if (profile.include_hks_extrema) out.tail(4) = hks_extrema(s);
    return out;
}

} // namespace wavpers
