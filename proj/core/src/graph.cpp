#include "wavpers/graph.hpp"

#include <algorithm>
#include <numeric>

#include "wavpers/errors.hpp"

namespace wavpers {

namespace {

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

} // namespace

int Graph::n_components() const {
    std::vector<int> parent(n_vertices);
    std::iota(parent.begin(), parent.end(), 0);
    int components = n_vertices;
    for (auto [u, v] : edges) {
        int ru = find_root(parent, u);
        int rv = find_root(parent, v);
        if (ru != rv) {
            parent[ru] = rv;
            --components;
        }
    }
    return components;
}

void Graph::validate() const {
    std::vector<std::pair<int, int>> seen;
    seen.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u == v) throw data_error("graph has a self-loop at vertex " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices)
            throw data_error("edge endpoint out of range");
        if (u > v) std::swap(u, v);
        seen.emplace_back(u, v);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw data_error("graph has a duplicate edge");
}

std::vector<int> disjoint_union_offsets(const Dataset& d) {
    std::vector<int> offsets(d.graphs.size());
    int acc = 0;
    for (std::size_t i = 0; i < d.graphs.size(); ++i) {
        offsets[i] = acc;
        acc += d.graphs[i].n_vertices;
    }
    return offsets;
}

} // namespace wavpers
