#include "wavpers/cache.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "wavpers/errors.hpp"
#include "wavpers/persistence.hpp"

namespace wavpers {

PrecomputedData precompute(const Dataset& d, const WaveletBasis& basis) {
    PrecomputedData p;
    p.dataset_name = d.name;
    p.basis_kind = basis.kind_name();

    p.spectra.reserve(d.size());
    for (const Graph& g : d.graphs) p.spectra.push_back(eigendecompose(normalised_laplacian(g)));

    p.raw_param = build_parametrisation(d, p.spectra, basis);
    p.recond_param = recondition(p.raw_param);

    const Eigen::VectorXd hks_fast = stacked_signature(
        p.spectra, [](double x) { return std::exp(-10.0 * x); });
    p.theta_init = least_squares_init(p.recond_param, hks_fast);
    p.rescale = fit_rescale(hks_fast);

    const DatasetProfile profile = DatasetProfile::for_dataset(d.name);
    p.features.reserve(d.size());
    p.static_images.reserve(d.size());
    for (int i = 0; i < d.size(); ++i) {
        p.features.push_back(feature_vector(p.spectra[i], profile));
        const Eigen::VectorXd slow = heat_kernel_signature(p.spectra[i], 0.1);
        const ExtendedDiagram diagram = extended_persistence(d.graphs[i], slow);
        p.static_images.push_back(
            DiagramImage(diagram, p.rescale, p.image_spec).pixels());
    }
    return p;
}

namespace {

constexpr char kMagic[8] = {'W', 'V', 'P', 'S', 'C', 'A', 'C', 'H'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

void put_string(std::ostream& os, const std::string& s) {
    put_u64(os, s.size());
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    put_u64(os, static_cast<std::uint64_t>(m.rows()));
    put_u64(os, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) put_f64(os, m(r, c));
}

void put_vector(std::ostream& os, const Eigen::VectorXd& v) {
    put_u64(os, static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) put_f64(os, v[i]);
}

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

std::string get_string(std::istream& is) {
    std::string s(get_u64(is), '\0');
    is.read(s.data(), static_cast<std::streamsize>(s.size()));
    return s;
}

Eigen::MatrixXd get_matrix(std::istream& is) {
    const auto rows = static_cast<Eigen::Index>(get_u64(is));
    const auto cols = static_cast<Eigen::Index>(get_u64(is));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = get_f64(is);
    return m;
}

Eigen::VectorXd get_vector(std::istream& is) {
    const auto n = static_cast<Eigen::Index>(get_u64(is));
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = get_f64(is);
    return v;
}

// The derived (reconditioned) basis is rebuilt from the raw parametrisation
// on load rather than stored.
void put_basis(std::ostream& os, const WaveletBasis& b) {
    switch (b.kind()) {
    case WaveletBasis::Kind::chebyshev:
        put_u32(os, 0);
        put_u32(os, static_cast<std::uint32_t>(b.size()));
        break;
    case WaveletBasis::Kind::rbf_inverse_multiquadric:
        put_u32(os, 1);
        break;
    case WaveletBasis::Kind::derived:
        throw data_error("cache: derived bases are rebuilt, not stored");
    }
}

WaveletBasis get_basis(std::istream& is) {
    const std::uint32_t kind = get_u32(is);
    if (kind == 0) return chebyshev_basis(static_cast<int>(get_u32(is)));
    if (kind == 1) return rbf_basis();
    throw data_error("cache: unknown basis kind");
}

void put_param(std::ostream& os, const Parametrisation& p) {
    put_basis(os, p.basis);
    put_matrix(os, p.matrix);
    put_u64(os, p.row_offsets.size());
    for (int v : p.row_offsets) put_u64(os, static_cast<std::uint64_t>(v));
    for (int v : p.graph_sizes) put_u64(os, static_cast<std::uint64_t>(v));
    put_vector(os, p.singular_values);
    put_matrix(os, p.left_vectors);
    put_matrix(os, p.right_vectors);
    put_u32(os, static_cast<std::uint32_t>(p.rank));
}

Parametrisation get_param(std::istream& is) {
    Parametrisation p;
    p.basis = get_basis(is);
    p.matrix = get_matrix(is);
    const std::uint64_t n = get_u64(is);
    p.row_offsets.resize(n);
    p.graph_sizes.resize(n);
    for (auto& v : p.row_offsets) v = static_cast<int>(get_u64(is));
    for (auto& v : p.graph_sizes) v = static_cast<int>(get_u64(is));
    p.singular_values = get_vector(is);
    p.left_vectors = get_matrix(is);
    p.right_vectors = get_matrix(is);
    p.rank = static_cast<int>(get_u32(is));
    return p;
}

} // namespace

void save_cache(const PrecomputedData& p, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw data_error("cannot write cache file " + path);
    os.write(kMagic, sizeof(kMagic));
    put_u32(os, kVersion);
    put_string(os, p.dataset_name);
    put_string(os, p.basis_kind);

    put_u64(os, p.spectra.size());
    for (const auto& s : p.spectra) {
        put_vector(os, s.eigenvalues);
        put_matrix(os, s.eigenvectors);
    }
    put_param(os, p.raw_param);
    put_vector(os, p.theta_init);
    put_f64(os, p.rescale.scale);
    put_f64(os, p.rescale.shift);
    put_u32(os, static_cast<std::uint32_t>(p.image_spec.grid));
    put_f64(os, p.image_spec.sigma);

    put_u64(os, p.features.size());
    for (const auto& f : p.features) put_vector(os, f);
    put_u64(os, p.static_images.size());
    for (const auto& img : p.static_images) {
        put_u64(os, img.size());
        for (double v : img) put_f64(os, v);
    }
    if (!os) throw data_error("short write to cache file " + path);
}

PrecomputedData load_cache(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw data_error("cannot open cache file " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw data_error("cache file " + path + " has a bad header");
    if (get_u32(is) != kVersion) throw data_error("cache file " + path + ": unsupported version");

    PrecomputedData p;
    p.dataset_name = get_string(is);
    p.basis_kind = get_string(is);

    const std::uint64_t n = get_u64(is);
    p.spectra.resize(n);
    for (auto& s : p.spectra) {
        s.eigenvalues = get_vector(is);
        s.eigenvectors = get_matrix(is);
    }
    p.raw_param = get_param(is);
    p.recond_param = recondition(p.raw_param);
    p.theta_init = get_vector(is);
    p.rescale.scale = get_f64(is);
    p.rescale.shift = get_f64(is);
    p.image_spec.grid = static_cast<int>(get_u32(is));
    p.image_spec.sigma = get_f64(is);

    p.features.resize(get_u64(is));
    for (auto& f : p.features) f = get_vector(is);
    p.static_images.resize(get_u64(is));
    for (auto& img : p.static_images) {
        img.resize(get_u64(is));
        for (double& v : img) v = get_f64(is);
    }
    if (!is) throw data_error("cache file " + path + " is truncated");
    return p;
}

std::string cache_path(const std::string& dir, const std::string& dataset,
                       const std::string& basis_kind) {
    return dir + "/" + dataset + "." + basis_kind + ".cache";
}

} // namespace wavpers
