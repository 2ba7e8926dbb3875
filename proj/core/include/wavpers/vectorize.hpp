#ifndef WAVPERS_VECTORIZE_HPP
#define WAVPERS_VECTORIZE_HPP

#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "wavpers/persistence.hpp"

namespace wavpers {

/// Square image grid for persistence diagrams: `grid` nodes per axis spaced
/// exactly sigma apart starting at -sigma, so the default 20-node grid
/// covers [-sigma, 1+sigma] with sigma = 1/17 (19 steps of sigma equal
/// 1 + 2*sigma there). sigma is also the Gaussian width.
struct ImageSpec {
    int grid = 20;
    double sigma = 1.0 / 17.0;

    double spacing() const { return sigma; }
    double node(int k) const { return -sigma + k * spacing(); }
    int n_pixels() const { return grid * grid; }
};

/// x -> scale * x + shift, fitted once per dataset so the initial vertex
/// function spans [0, 1].
struct AffineRescale {
    double scale = 1.0;
    double shift = 0.0;

    double operator()(double x) const { return scale * x + shift; }
};

/// Fits to the range of the stacked initial vertex function; throws
/// numerical_error when the function is constant.
AffineRescale fit_rescale(const Eigen::VectorXd& initial);

/// Persistence weight: sin^2(pi/2 * min(p/sigma, 1)); 0 at p = 0, 1 for
/// p >= sigma.
double weight(double persistence, double sigma);
double weight_derivative(double persistence, double sigma);

/// One diagram rendered as weighted Gaussians on the grid. Pixels are
/// row-major with index iy * grid + ix: ix walks the birth axis, iy the
/// persistence axis. Keeps its input points so the gradient can be
/// replayed.
class PersistenceImage {
public:
    PersistenceImage(std::vector<std::pair<double, double>> birth_pers, ImageSpec spec);

    const std::vector<double>& pixels() const { return pixels_; }
    const ImageSpec& spec() const { return spec_; }

    /// Pixel cotangents -> per-point (d/dbirth, d/dpersistence).
    std::vector<std::pair<double, double>> backward(const std::vector<double>& dpixels) const;

private:
    std::vector<std::pair<double, double>> points_;
    ImageSpec spec_;
    std::vector<double> pixels_;
};

PersistenceImage persistence_image(std::vector<std::pair<double, double>> birth_pers,
                                   const ImageSpec& spec);

/// Three-channel stack of an extended diagram: degree 0 (ord0 and ext0
/// merged), rel1, ext1. Coordinates are rescaled, every point is
/// reoriented to (min, max) so persistence is non-negative, and the swap
/// is replayed in the gradient.
class DiagramImage {
public:
    static constexpr int kChannels = 3;

    DiagramImage(const ExtendedDiagram& d, const AffineRescale& r, const ImageSpec& spec);

    /// kChannels * grid * grid, channel-major.
    const std::vector<double>& pixels() const { return pixels_; }
    const ImageSpec& spec() const { return spec_; }

    /// Pixel cotangents (same layout as pixels()) -> cotangents on the raw
    /// diagram coordinates.
    DiagramCotangent backward(const std::vector<double>& dpixels) const;

private:
    struct Source {
        int quadrant;  // 0 ord0, 1 ext0, 2 ext1, 3 rel1
        int index;     // within its quadrant
        bool swapped;  // reorientation exchanged birth and death
    };

    ImageSpec spec_;
    double scale_ = 1.0;
    std::vector<double> pixels_;
    std::vector<PersistenceImage> channel_images_;
    std::vector<std::vector<Source>> channel_sources_;
    std::vector<std::size_t> quadrant_sizes_;
};

DiagramImage vectorise_diagram(const ExtendedDiagram& d, const AffineRescale& r,
                               const ImageSpec& spec);

/// Row-major CSV with 6 significant digits.
void write_image_csv(std::ostream& os, const std::vector<double>& pixels, int grid);

/// 8-bit ASCII PGM, normalised by the peak pixel.
void write_image_pgm(std::ostream& os, const std::vector<double>& pixels, int grid);

} // namespace wavpers

#endif // WAVPERS_VECTORIZE_HPP
