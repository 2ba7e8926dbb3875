#ifndef WAVPERS_FEATURES_HPP
#define WAVPERS_FEATURES_HPP

#include <string>

#include <Eigen/Core>

#include "wavpers/path_signature.hpp"
#include "wavpers/spectral.hpp"

namespace wavpers {

/// (max, min) of the heat kernel signatures at t = 10 and t = 0.1.
Eigen::Vector4d hks_extrema(const SpectralData& s);

/// How the fixed per-graph features are assembled for a dataset family.
struct DatasetProfile {
    PathMode path_mode = PathMode::delay;
    bool include_hks_extrema = false;

    int feature_dim() const { return 8 + (include_hks_extrema ? 4 : 0); }

    /// Social-network datasets (IMDB*) use the time-augmented path plus
    /// heat kernel extrema; everything else uses the delay embedding.
    static DatasetProfile for_dataset(const std::string& name);
};

/// Fixed non-persistence features of one graph: the 8 log-signature
/// coordinates of the eigenvalue path, optionally followed by 4 heat
/// kernel extrema.
Eigen::VectorXd feature_vector(const SpectralData& s, const DatasetProfile& profile);

} // namespace wavpers

#endif // WAVPERS_FEATURES_HPP
