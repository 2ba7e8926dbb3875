#include "wavpers/vectorize.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "wavpers/errors.hpp"

namespace wavpers {

AffineRescale fit_rescale(const Eigen::VectorXd& initial) {
    if (initial.size() == 0) throw numerical_error("fit_rescale: empty input");
    const double lo = initial.minCoeff();
    const double hi = initial.maxCoeff();
    if (!(hi > lo)) throw numerical_error("fit_rescale: constant vertex function, range is degenerate");
    AffineRescale r;
    r.scale = 1.0 / (hi - lo);
    r.shift = -lo * r.scale;
    return r;
}

double weight(double persistence, double sigma) {
    const double u = std::min(persistence / sigma, 1.0);
    const double s = std::sin(0.5 * std::numbers::pi * u);
    return s * s;
}

double weight_derivative(double persistence, double sigma) {
    if (persistence >= sigma) return 0.0;
    return std::sin(std::numbers::pi * persistence / sigma) * 0.5 * std::numbers::pi / sigma;
}

PersistenceImage::PersistenceImage(std::vector<std::pair<double, double>> birth_pers,
                                   ImageSpec spec)
    : points_(std::move(birth_pers)), spec_(spec), pixels_(spec.n_pixels(), 0.0) {
    const int n = spec_.grid;
    const double inv2s2 = 1.0 / (2.0 * spec_.sigma * spec_.sigma);
    std::vector<double> gx(n), gy(n);
    for (const auto& [b, p] : points_) {
        const double w = weight(p, spec_.sigma);
        // separable Gaussian: exp over each axis once
        for (int k = 0; k < n; ++k) {
            const double dx = spec_.node(k) - b;
            const double dy = spec_.node(k) - p;
            gx[k] = std::exp(-dx * dx * inv2s2);
            gy[k] = std::exp(-dy * dy * inv2s2);
        }
        for (int iy = 0; iy < n; ++iy) {
            const double wy = w * gy[iy];
            double* row = pixels_.data() + iy * n;
            for (int ix = 0; ix < n; ++ix) row[ix] += wy * gx[ix];
        }
    }
}

std::vector<std::pair<double, double>> PersistenceImage::backward(
    const std::vector<double>& dpixels) const {
    if (dpixels.size() != pixels_.size())
        throw numerical_error("persistence image backward: pixel cotangent size mismatch");

    const int n = spec_.grid;
    const double s2 = spec_.sigma * spec_.sigma;
    const double inv2s2 = 1.0 / (2.0 * s2);
    std::vector<std::pair<double, double>> out(points_.size(), {0.0, 0.0});
    std::vector<double> gx(n), gy(n);

    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto [b, p] = points_[i];
        const double w = weight(p, spec_.sigma);
        const double dw = weight_derivative(p, spec_.sigma);
        for (int k = 0; k < n; ++k) {
            const double dx = spec_.node(k) - b;
            const double dy = spec_.node(k) - p;
            gx[k] = std::exp(-dx * dx * inv2s2);
            gy[k] = std::exp(-dy * dy * inv2s2);
        }
        // row sums of upstream * gx so each axis is visited once
        double acc_b = 0.0, acc_p_gauss = 0.0, acc_w = 0.0;
        for (int iy = 0; iy < n; ++iy) {
            const double* row = dpixels.data() + iy * n;
            double sx = 0.0, sxd = 0.0;
            for (int ix = 0; ix < n; ++ix) {
                sx += row[ix] * gx[ix];
                sxd += row[ix] * gx[ix] * (spec_.node(ix) - b);
            }
            acc_b += sxd * gy[iy];                            // sum u * G * (x-b)
            acc_p_gauss += sx * gy[iy] * (spec_.node(iy) - p); // sum u * G * (y-p)
            acc_w += sx * gy[iy];                             // sum u * G
        }
        out[i].first = w * acc_b / s2;
        out[i].second = w * acc_p_gauss / s2 + dw * acc_w;
    }
    return out;
}

PersistenceImage persistence_image(std::vector<std::pair<double, double>> birth_pers,
                                   const ImageSpec& spec) {
    return PersistenceImage(std::move(birth_pers), spec);
}

DiagramImage::DiagramImage(const ExtendedDiagram& d, const AffineRescale& r,
                           const ImageSpec& spec)
    : spec_(spec), scale_(r.scale) {
    quadrant_sizes_ = {d.ord0.size(), d.ext0.size(), d.ext1.size(), d.rel1.size()};
    channel_sources_.resize(kChannels);
    std::vector<std::vector<std::pair<double, double>>> channel_points(kChannels);

    auto add = [&](int channel, const std::vector<DiagramPoint>& pts, int quadrant) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double b = r(pts[i].birth);
            const double dth = r(pts[i].death);
            const bool swapped = dth < b;
            const double lo = swapped ? dth : b;
            const double hi = swapped ? b : dth;
            channel_points[channel].emplace_back(lo, hi - lo);
            channel_sources_[channel].push_back({quadrant, static_cast<int>(i), swapped});
        }
    };
    add(0, d.ord0, 0);
    add(0, d.ext0, 1);
    add(1, d.rel1, 3);
    add(2, d.ext1, 2);

    pixels_.reserve(kChannels * spec.n_pixels());
    for (int c = 0; c < kChannels; ++c) {
        channel_images_.emplace_back(std::move(channel_points[c]), spec);
        const auto& px = channel_images_.back().pixels();
        pixels_.insert(pixels_.end(), px.begin(), px.end());
    }
}

DiagramCotangent DiagramImage::backward(const std::vector<double>& dpixels) const {
    if (dpixels.size() != pixels_.size())
        throw numerical_error("diagram image backward: pixel cotangent size mismatch");

    DiagramCotangent ct;
    ct.ord0.resize(quadrant_sizes_[0]);
    ct.ext0.resize(quadrant_sizes_[1]);
    ct.ext1.resize(quadrant_sizes_[2]);
    ct.rel1.resize(quadrant_sizes_[3]);
    std::vector<PointCotangent>* quadrants[4] = {&ct.ord0, &ct.ext0, &ct.ext1, &ct.rel1};

    const int per_channel = spec_.n_pixels();
    for (int c = 0; c < kChannels; ++c) {
        std::vector<double> up(dpixels.begin() + c * per_channel,
                               dpixels.begin() + (c + 1) * per_channel);
        const auto point_grads = channel_images_[c].backward(up);
        for (std::size_t i = 0; i < point_grads.size(); ++i) {
            const auto [d_lo, d_pers] = point_grads[i];
            // birth = lo, persistence = hi - lo
            const double d_lo_total = d_lo - d_pers;
            const double d_hi_total = d_pers;
            const Source& src = channel_sources_[c][i];
            PointCotangent& pc = (*quadrants[src.quadrant])[src.index];
            const double d_birth = src.swapped ? d_hi_total : d_lo_total;
            const double d_death = src.swapped ? d_lo_total : d_hi_total;
            // chain through the affine rescale
            pc.birth += scale_ * d_birth;
            pc.death += scale_ * d_death;
        }
    }
    return ct;
}

DiagramImage vectorise_diagram(const ExtendedDiagram& d, const AffineRescale& r,
                               const ImageSpec& spec) {
    return DiagramImage(d, r, spec);
}

void write_image_csv(std::ostream& os, const std::vector<double>& pixels, int grid) {
    os.precision(6);
    for (int iy = 0; iy < grid; ++iy) {
        for (int ix = 0; ix < grid; ++ix) {
            if (ix) os << ',';
            os << pixels[iy * grid + ix];
        }
        os << '\n';
    }
}

void write_image_pgm(std::ostream& os, const std::vector<double>& pixels, int grid) {
    double peak = 0.0;
    for (double v : pixels) peak = std::max(peak, v);
    if (peak <= 0.0) peak = 1.0;
    os << "P2\n" << grid << ' ' << grid << "\n255\n";
    for (int iy = 0; iy < grid; ++iy) {
        for (int ix = 0; ix < grid; ++ix) {
            if (ix) os << ' ';
            os << static_cast<int>(std::lround(255.0 * pixels[iy * grid + ix] / peak));
        }
        os << '\n';
    }
}

} // namespace wavpers
