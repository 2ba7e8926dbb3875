#ifndef WAVPERS_CACHE_HPP
#define WAVPERS_CACHE_HPP

#include <string>
#include <vector>

#include "wavpers/features.hpp"
#include "wavpers/graph.hpp"
#include "wavpers/parametrisation.hpp"
#include "wavpers/spectral.hpp"
#include "wavpers/vectorize.hpp"

namespace wavpers {

/// Everything derived from a dataset that training needs: per-graph
/// eigendata, the raw and reconditioned parametrisations, the initial
/// wavelet coefficients, the dataset-wide rescale, fixed features and the
/// static heat-kernel persistence images.
struct PrecomputedData {
    std::string dataset_name;
    std::string basis_kind; // "rbf" or "chebyshev"
    std::vector<SpectralData> spectra;
    Parametrisation raw_param;
    Parametrisation recond_param;
    Eigen::VectorXd theta_init;
    AffineRescale rescale;
    ImageSpec image_spec;
    std::vector<Eigen::VectorXd> features;          // per graph
    std::vector<std::vector<double>> static_images; // per graph, 3*grid*grid
};

/// Eigendecomposition per graph, parametrisation + SVD + reconditioning,
/// least-squares initial coefficients against the t=10 heat kernel
/// signature, rescale fit, static t=0.1 images, fixed features.
PrecomputedData precompute(const Dataset& d, const WaveletBasis& basis);

/// Binary sidecar keyed by dataset name and basis kind: versioned header,
/// then row-major 64-bit float matrices.
void save_cache(const PrecomputedData& p, const std::string& path);
PrecomputedData load_cache(const std::string& path);

/// Conventional sidecar filename under a cache directory.
std::string cache_path(const std::string& dir, const std::string& dataset,
                       const std::string& basis_kind);

} // namespace wavpers

#endif // WAVPERS_CACHE_HPP
