#ifndef WAVPERS_GRAPH_HPP
#define WAVPERS_GRAPH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wavpers {

/// Simple undirected graph with contiguous 0-based vertex indices.
/// Edges are stored once as ordered pairs (u < v); no self-loops,
/// no duplicates.
struct Graph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;

    int n_edges() const { return static_cast<int>(edges.size()); }

    std::vector<int> degrees() const {
        std::vector<int> deg(n_vertices, 0);
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        return deg;
    }

    /// Connected components via union-find; returns component count.
    int n_components() const;

    /// Checks the simplicity invariants; throws data_error on violation.
    void validate() const;
};

/// Per-file bookkeeping emitted by the loader.
struct LoadStats {
    int self_loops_dropped = 0;
    int duplicate_edges_collapsed = 0;
};

/// An ordered collection of graphs with binary labels in {0,1}.
struct Dataset {
    std::string name;
    std::vector<Graph> graphs;
    std::vector<int> labels;
    LoadStats load_stats;

    int size() const { return static_cast<int>(graphs.size()); }
    int total_vertices() const {
        int n = 0;
        for (const auto& g : graphs) n += g.n_vertices;
        return n;
    }
};

/// offsets[i] = sum of vertex counts of graphs before i; stacks per-graph
/// vertex functions into one vector over the disjoint union.
std::vector<int> disjoint_union_offsets(const Dataset& d);

} // namespace wavpers

#endif // WAVPERS_GRAPH_HPP
