#include "wavpers/cone.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "wavpers/errors.hpp"

namespace wavpers {

namespace {

std::uint64_t simplex_key(int dim, const std::array<int, 3>& verts) {
    return (static_cast<std::uint64_t>(dim) << 60) |
           (static_cast<std::uint64_t>(verts[0] + 1) << 40) |
           (static_cast<std::uint64_t>(verts[1] + 1) << 20) |
           static_cast<std::uint64_t>(verts[2] + 1);
}

} // namespace

ConeComplex build_cone(const Graph& g, const Eigen::VectorXd& f) {
    const double sup = f.size() > 0 ? f.cwiseAbs().maxCoeff() : 0.0;
    return build_cone(g, f, sup + 1.0);
}

ConeComplex build_cone(const Graph& g, const Eigen::VectorXd& f, double radius) {
    if (f.size() != g.n_vertices)
        throw numerical_error("build_cone: vertex function has wrong length");
    for (int v = 0; v < g.n_vertices; ++v)
        if (!std::isfinite(f[v])) throw numerical_error("build_cone: non-finite vertex value");
    if (g.n_vertices > 0 && radius <= f.cwiseAbs().maxCoeff())
        throw numerical_error("build_cone: radius must exceed sup|f|");

    ConeComplex c;
    c.n_vertices = g.n_vertices;
    c.radius = radius;
    const int apex = c.apex();
    c.simplices.reserve(1 + 2 * g.n_vertices + 2 * g.edges.size());

    c.simplices.push_back({-radius, 0, {apex, -1, -1}, -1, true});
    for (int v = 0; v < g.n_vertices; ++v) {
        c.simplices.push_back({f[v], 0, {v, -1, -1}, v, false});
        c.simplices.push_back({2.0 * radius - f[v], 1, {v, apex, -1}, v, true});
    }
    for (auto [u, v] : g.edges) {
        if (u > v) std::swap(u, v);
        // ties on equal values go to the lower index
        const int vmax = f[v] > f[u] ? v : u;
        const int vmin = f[v] < f[u] ? v : u;
        c.simplices.push_back({std::max(f[u], f[v]), 1, {u, v, -1}, vmax, false});
        c.simplices.push_back({2.0 * radius - std::min(f[u], f[v]), 2, {u, v, apex}, vmin, true});
    }

    std::sort(c.simplices.begin(), c.simplices.end(),
              [](const ConeSimplex& a, const ConeSimplex& b) {
                  if (a.value != b.value) return a.value < b.value;
                  if (a.dim != b.dim) return a.dim < b.dim;
                  return a.verts < b.verts;
              });
    return c;
}

bool filtration_is_monotone(const ConeComplex& c) {
    std::unordered_map<std::uint64_t, double> value;
    value.reserve(c.simplices.size());
    for (const auto& s : c.simplices) value[simplex_key(s.dim, s.verts)] = s.value;

    auto face_value = [&](int a, int b) {
        std::array<int, 3> verts{a, b, -1};
        return value.at(simplex_key(b < 0 ? 0 : 1, verts));
    };

    for (const auto& s : c.simplices) {
        if (s.dim == 1) {
            if (s.value < face_value(s.verts[0], -1)) return false;
            if (s.value < face_value(s.verts[1], -1)) return false;
        } else if (s.dim == 2) {
            if (s.value < face_value(s.verts[0], s.verts[1])) return false;
            if (s.value < face_value(s.verts[0], s.verts[2])) return false;
            if (s.value < face_value(s.verts[1], s.verts[2])) return false;
        }
    }
    return true;
}

} // namespace wavpers
