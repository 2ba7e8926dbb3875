#include "wavpers/persistence_oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "wavpers/errors.hpp"

namespace wavpers {

namespace {

using Mask = std::uint64_t;

/// Rank of a list of GF(2) vectors given as bit masks. (v ^ b) < v exactly
/// when b's leading bit is set in v, so each xor strictly decreases v.
int gf2_rank(std::vector<Mask> vecs) {
    std::vector<Mask> basis; // row echelon, distinct leading bits
    for (Mask v : vecs) {
        bool changed = true;
        while (v != 0 && changed) {
            changed = false;
            for (Mask b : basis) {
                if ((v ^ b) < v) {
                    v ^= b;
                    changed = true;
                }
            }
        }
        if (v != 0) basis.push_back(v);
    }
    return static_cast<int>(basis.size());
}

/// Kernel of a GF(2) linear map. cols[j] is the image of unknown j as a
/// row-bit mask; the result is a basis of the kernel as unknown-bit masks.
std::vector<Mask> gf2_kernel(const std::vector<Mask>& cols) {
    std::vector<std::pair<Mask, Mask>> pivots; // (reduced column, combination)
    std::vector<Mask> kernel;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        Mask c = cols[j];
        Mask combo = Mask{1} << j;
        bool changed = true;
        while (c != 0 && changed) {
            changed = false;
            for (const auto& [pc, pcombo] : pivots) {
                if ((c ^ pc) < c) {
                    c ^= pc;
                    combo ^= pcombo;
                    changed = true;
                }
            }
        }
        if (c == 0) kernel.push_back(combo);
        else pivots.emplace_back(c, combo);
    }
    return kernel;
}

struct ChainSpaces {
    std::vector<Mask> cycles;     // Z_p(X, A) as masks over C_p(G)
    std::vector<Mask> boundaries; // B_p(X, A), a subspace of the cycles
    int boundary_rank = 0;
};

/// rank of the map H_p(i) -> H_p(j) induced by inclusion of nested pairs:
/// dim((Z_i + B_j) / B_j).
int composite_rank(const ChainSpaces& si, const ChainSpaces& sj) {
    std::vector<Mask> stacked = si.cycles;
    stacked.insert(stacked.end(), sj.boundaries.begin(), sj.boundaries.end());
    return gf2_rank(std::move(stacked)) - sj.boundary_rank;
}

} // namespace

ExtendedDiagram oracle_extended_persistence(const Graph& g, const Eigen::VectorXd& f) {
    if (g.n_vertices > 64 || g.n_edges() > 64)
        throw numerical_error("oracle: graph too large for mask-based chains");
    if (f.size() != g.n_vertices)
        throw numerical_error("oracle: vertex function has wrong length");

    ExtendedDiagram out;
    if (g.n_vertices == 0) return out;

    // distinct critical values, ascending
    std::vector<double> crit(f.begin(), f.end());
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
    const int k = static_cast<int>(crit.size());
    const int chain_length = 2 * k;

    const int ne = g.n_edges();
    std::vector<Mask> edge_boundary(ne);
    for (int e = 0; e < ne; ++e)
        edge_boundary[e] = (Mask{1} << g.edges[e].first) | (Mask{1} << g.edges[e].second);

    for (int degree = 0; degree <= 1; ++degree) {
        // chain spaces at positions 1..2k
        std::vector<ChainSpaces> spaces(chain_length + 1); // 1-based
        for (int pos = 1; pos <= chain_length; ++pos) {
            ChainSpaces s;
            if (pos <= k) {
                // ascending pair (G_t, empty), t = crit[pos-1]
                const double t = crit[pos - 1];
                if (degree == 0) {
                    for (int v = 0; v < g.n_vertices; ++v)
                        if (f[v] <= t) s.cycles.push_back(Mask{1} << v);
                    for (int e = 0; e < ne; ++e)
                        if (f[g.edges[e].first] <= t && f[g.edges[e].second] <= t)
                            s.boundaries.push_back(edge_boundary[e]);
                } else {
                    std::vector<Mask> cols;
                    std::vector<int> used_edges;
                    for (int e = 0; e < ne; ++e)
                        if (f[g.edges[e].first] <= t && f[g.edges[e].second] <= t) {
                            cols.push_back(edge_boundary[e]);
                            used_edges.push_back(e);
                        }
                    for (Mask combo : gf2_kernel(cols)) {
                        Mask cycle = 0;
                        for (std::size_t j = 0; j < used_edges.size(); ++j)
                            if (combo & (Mask{1} << j)) cycle |= Mask{1} << used_edges[j];
                        s.cycles.push_back(cycle);
                    }
                    // no 2-cells in a graph: no degree-1 boundaries
                }
            } else {
                // descending pair (G, G^s), s = crit[k - (pos - k)]
                const double thr = crit[2 * k - pos];
                Mask a_vertices = 0;
                for (int v = 0; v < g.n_vertices; ++v)
                    if (f[v] >= thr) a_vertices |= Mask{1} << v;
                if (degree == 0) {
                    for (int v = 0; v < g.n_vertices; ++v) s.cycles.push_back(Mask{1} << v);
                    for (int e = 0; e < ne; ++e) s.boundaries.push_back(edge_boundary[e]);
                    for (int v = 0; v < g.n_vertices; ++v)
                        if (a_vertices & (Mask{1} << v)) s.boundaries.push_back(Mask{1} << v);
                } else {
                    // relative cycles: boundary supported on A's vertices
                    std::vector<Mask> cols(ne);
                    for (int e = 0; e < ne; ++e) cols[e] = edge_boundary[e] & ~a_vertices;
                    for (Mask combo : gf2_kernel(cols)) s.cycles.push_back(combo);
                    for (int e = 0; e < ne; ++e)
                        if (f[g.edges[e].first] >= thr && f[g.edges[e].second] >= thr)
                            s.boundaries.push_back(Mask{1} << e);
                }
            }
            s.boundary_rank = gf2_rank(s.boundaries);
            spaces[pos] = std::move(s);
        }

        // composite ranks r(i, j); r(i, j) = 0 outside 1 <= i <= j <= 2k
        std::vector<std::vector<int>> r(chain_length + 1,
                                        std::vector<int>(chain_length + 1, 0));
        for (int i = 1; i <= chain_length; ++i)
            for (int j = i; j <= chain_length; ++j)
                r[i][j] = composite_rank(spaces[i], spaces[j]);

        auto rank_at = [&](int i, int j) {
            if (i < 1 || j > chain_length) return 0;
            return r[i][j];
        };

        // interval [i, j): born at i, last alive at j-1
        for (int i = 1; i <= chain_length; ++i) {
            for (int j = i + 1; j <= chain_length + 1; ++j) {
                const int mult = rank_at(i, j - 1) - rank_at(i, j) - rank_at(i - 1, j - 1) +
                                 rank_at(i - 1, j);
                if (mult == 0) continue;
                if (mult < 0) throw numerical_error("oracle: negative interval multiplicity");

                auto threshold = [&](int pos) { return crit[2 * k - pos]; };
                DiagramPoint pt;
                std::vector<DiagramPoint>* target = nullptr;
                if (j <= k) {
                    pt.birth = crit[i - 1];
                    pt.death = crit[j - 1];
                    if (degree != 0)
                        throw numerical_error("oracle: unexpected ordinary degree-1 interval");
                    target = &out.ord0;
                } else if (i <= k) {
                    pt.birth = crit[i - 1];
                    pt.death = threshold(j); // j > k here
                    target = degree == 0 ? &out.ext0 : &out.ext1;
                } else {
                    pt.birth = threshold(i);
                    pt.death = threshold(j);
                    if (degree != 1)
                        throw numerical_error("oracle: unexpected relative degree-0 interval");
                    target = &out.rel1;
                }
                for (int copies = 0; copies < mult; ++copies) target->push_back(pt);
            }
        }
    }
    return out;
}

namespace {

bool points_match(std::vector<DiagramPoint> a, std::vector<DiagramPoint> b, double tol) {
    if (a.size() != b.size()) return false;
    auto by_coords = [](const DiagramPoint& x, const DiagramPoint& y) {
        return x.birth != y.birth ? x.birth < y.birth : x.death < y.death;
    };
    std::sort(a.begin(), a.end(), by_coords);
    std::sort(b.begin(), b.end(), by_coords);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].birth - b[i].birth) > tol) return false;
        if (std::abs(a[i].death - b[i].death) > tol) return false;
    }
    return true;
}

} // namespace

bool diagrams_match(const ExtendedDiagram& a, const ExtendedDiagram& b, double tol) {
    return points_match(a.ord0, b.ord0, tol) && points_match(a.ext0, b.ext0, tol) &&
           points_match(a.ext1, b.ext1, tol) && points_match(a.rel1, b.rel1, tol);
}

} // namespace wavpers
