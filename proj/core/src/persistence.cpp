#include "wavpers/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "wavpers/errors.hpp"

namespace wavpers {

namespace {

constexpr double kRadiusGuard = 1e-9;

std::uint64_t simplex_key(int dim, int a, int b, int c) {
    return (static_cast<std::uint64_t>(dim) << 60) |
           (static_cast<std::uint64_t>(a + 1) << 40) |
           (static_cast<std::uint64_t>(b + 1) << 20) | static_cast<std::uint64_t>(c + 1);
}

/// XOR-merge of two sorted index lists (symmetric difference).
std::vector<int> xor_columns(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) out.push_back(a[i++]);
        else if (b[j] < a[i]) out.push_back(b[j++]);
        else { ++i; ++j; }
    }
    out.insert(out.end(), a.begin() + i, a.end());
    out.insert(out.end(), b.begin() + j, b.end());
    return out;
}

} // namespace

std::vector<ConePair> ordinary_persistence(const ConeComplex& c) {
    const int n = static_cast<int>(c.simplices.size());

    std::unordered_map<std::uint64_t, int> index_of;
    index_of.reserve(n);
    for (int i = 0; i < n; ++i) {
        const auto& s = c.simplices[i];
        index_of[simplex_key(s.dim, s.verts[0], s.verts[1], s.verts[2])] = i;
    }

    // boundary columns as ascending filtration-index lists
    std::vector<std::vector<int>> boundary(n);
    for (int i = 0; i < n; ++i) {
        const auto& s = c.simplices[i];
        std::vector<int>& col = boundary[i];
        if (s.dim == 1) {
            col = {index_of.at(simplex_key(0, s.verts[0], -1, -1)),
                   index_of.at(simplex_key(0, s.verts[1], -1, -1))};
        } else if (s.dim == 2) {
            col = {index_of.at(simplex_key(1, s.verts[0], s.verts[1], -1)),
                   index_of.at(simplex_key(1, s.verts[0], s.verts[2], -1)),
                   index_of.at(simplex_key(1, s.verts[1], s.verts[2], -1))};
        }
        std::sort(col.begin(), col.end());
    }

    std::vector<int> pivot_owner(n, -1); // pivot row -> column that owns it
    std::vector<char> cleared(n, 0);
    std::vector<std::pair<int, int>> pairs; // (creator index, killer index)

    // columns of the top dimension first so that their pivots clear
    // creator columns one dimension down
    for (int dim = 2; dim >= 1; --dim) {
        for (int j = 0; j < n; ++j) {
            if (c.simplices[j].dim != dim || cleared[j]) continue;
            std::vector<int>& col = boundary[j];
            while (!col.empty()) {
                const int low = col.back();
                const int owner = pivot_owner[low];
                if (owner < 0) break;
                col = xor_columns(col, boundary[owner]);
            }
            if (col.empty()) {
                if (dim == 1)
                    throw numerical_error("reduction: unexpected essential degree-1 class");
                throw numerical_error("reduction: unexpected 2-cycle in the coned graph");
            }
            const int low = col.back();
            pivot_owner[low] = j;
            cleared[low] = 1;
            pairs.emplace_back(low, j);
        }
    }

    // unpaired vertices are essential; only the apex may remain
    for (int j = 0; j < n; ++j) {
        if (c.simplices[j].dim != 0 || cleared[j]) continue;
        if (c.simplices[j].critical_vertex != -1)
            throw numerical_error("reduction: essential degree-0 class away from the apex");
    }

    std::vector<ConePair> out;
    out.reserve(pairs.size());
    for (auto [creator, killer] : pairs) {
        const auto& b = c.simplices[creator];
        const auto& d = c.simplices[killer];
        out.push_back(ConePair{b.dim, b.value, d.value, b.critical_vertex, b.coned,
                               d.critical_vertex, d.coned});
    }
    std::sort(out.begin(), out.end(), [](const ConePair& a, const ConePair& b) {
        return std::tie(a.degree, a.birth, a.death) < std::tie(b.degree, b.birth, b.death);
    });
    return out;
}

ExtendedDiagram decode(const std::vector<ConePair>& pairs, double radius) {
    ExtendedDiagram d;
    d.radius = radius;
    for (const ConePair& p : pairs) {
        if (std::abs(p.birth - radius) < kRadiusGuard || std::abs(p.death - radius) < kRadiusGuard)
            throw numerical_error("decode: pair endpoint coincides with the threshold radius");

        DiagramPoint pt;
        if (p.death < radius) {
            // ordinary: both coordinates kept as-is
            if (p.birth == p.death) continue;
            pt = {p.birth, p.death, p.birth_vertex, p.birth_coned ? -1 : 1, p.death_vertex,
                  p.death_coned ? -1 : 1};
            if (p.degree == 0) d.ord0.push_back(pt);
            else throw numerical_error("decode: unexpected ordinary degree-1 pair");
        } else if (p.birth < radius) {
            // extended: death reflected by 2R
            pt = {p.birth, 2.0 * radius - p.death, p.birth_vertex, p.birth_coned ? -1 : 1,
                  p.death_vertex, p.death_coned ? 1 : -1};
            if (p.degree == 0) d.ext0.push_back(pt);
            else d.ext1.push_back(pt);
        } else {
            // relative: both reflected by 2R
            if (p.birth == p.death) continue;
            pt = {2.0 * radius - p.birth, 2.0 * radius - p.death, p.birth_vertex,
                  p.birth_coned ? 1 : -1, p.death_vertex, p.death_coned ? 1 : -1};
            if (p.degree == 1) d.rel1.push_back(pt);
            else throw numerical_error("decode: unexpected relative degree-0 pair");
        }
    }
    return d;
}

ExtendedDiagram extended_persistence(const Graph& g, const Eigen::VectorXd& f) {
    const double sup = f.size() > 0 ? f.cwiseAbs().maxCoeff() : 0.0;
    return extended_persistence(g, f, sup + 1.0);
}

ExtendedDiagram extended_persistence(const Graph& g, const Eigen::VectorXd& f, double radius) {
    const ConeComplex cone = build_cone(g, f, radius);
    ExtendedDiagram d = decode(ordinary_persistence(cone), radius);

    Eigen::VectorXd sorted = f;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1]) {
            d.generic = false;
            break;
        }
    return d;
}

Eigen::VectorXd diagram_gradient(const ExtendedDiagram& d, const DiagramCotangent& ct,
                                 int n_vertices) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_vertices);
    auto accumulate = [&](const std::vector<DiagramPoint>& pts,
                          const std::vector<PointCotangent>& cts) {
        if (pts.size() != cts.size())
            throw numerical_error("diagram_gradient: cotangent shape mismatch");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            grad[pts[i].birth_vertex] += pts[i].birth_sign * cts[i].birth;
            grad[pts[i].death_vertex] += pts[i].death_sign * cts[i].death;
        }
    };
    accumulate(d.ord0, ct.ord0);
    accumulate(d.ext0, ct.ext0);
    accumulate(d.ext1, ct.ext1);
    accumulate(d.rel1, ct.rel1);
    return grad;
}

namespace {

const char* quadrant_name(int q) {
    switch (q) {
    case 0: return "ord0";
    case 1: return "ext0";
    case 2: return "ext1";
    default: return "rel1";
    }
}

void write_points(std::ostream& os, const char* name, const std::vector<DiagramPoint>& pts) {
    for (const auto& p : pts) {
        os << name << ' ' << p.birth << ' ' << p.death << ' ' << p.birth_vertex << ' '
           << p.birth_sign << ' ' << p.death_vertex << ' ' << p.death_sign << '\n';
    }
}

} // namespace

void write_diagram(std::ostream& os, const ExtendedDiagram& d) {
    const auto old_precision = os.precision(17);
    write_points(os, quadrant_name(0), d.ord0);
    write_points(os, quadrant_name(1), d.ext0);
    write_points(os, quadrant_name(2), d.ext1);
    write_points(os, quadrant_name(3), d.rel1);
    os.precision(old_precision);
}

ExtendedDiagram read_diagram(std::istream& is) {
    ExtendedDiagram d;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string quad;
        DiagramPoint p;
        if (!(ls >> quad >> p.birth >> p.death >> p.birth_vertex >> p.birth_sign >>
              p.death_vertex >> p.death_sign))
            throw data_error("diagram: malformed line \"" + line + "\"");
        if (quad == "ord0") d.ord0.push_back(p);
        else if (quad == "ext0") d.ext0.push_back(p);
        else if (quad == "ext1") d.ext1.push_back(p);
        else if (quad == "rel1") d.rel1.push_back(p);
        else throw data_error("diagram: unknown quadrant \"" + quad + "\"");
    }
    return d;
}

} // namespace wavpers
