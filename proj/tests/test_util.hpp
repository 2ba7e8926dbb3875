#ifndef WAVPERS_TESTS_TEST_UTIL_HPP
#define WAVPERS_TESTS_TEST_UTIL_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wavpers/graph.hpp"
#include "wavpers/rng.hpp"

namespace wavpers::testing {

inline Graph path_graph(int n) {
    Graph g;
    g.n_vertices = n;
    for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
    return g;
}

inline Graph cycle_graph(int n) {
    Graph g = path_graph(n);
    if (n >= 3) g.edges.emplace_back(0, n - 1);
    return g;
}

inline Graph star_graph(int leaves) {
    Graph g;
    g.n_vertices = leaves + 1;
    for (int i = 1; i <= leaves; ++i) g.edges.emplace_back(0, i);
    return g;
}

inline Graph complete_graph(int n) {
    Graph g;
    g.n_vertices = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    return g;
}

inline Graph single_edge_graph() { return path_graph(2); }

inline Graph random_graph(int n, double p, Rng& rng) {
    Graph g;
    g.n_vertices = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) g.edges.emplace_back(i, j);
    return g;
}

inline Graph random_connected_graph(int n, double extra_p, Rng& rng) {
    Graph g;
    g.n_vertices = n;
    std::set<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(rng.uniform_index(v));
        edges.emplace(u, v);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(extra_p)) edges.emplace(i, j);
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

inline Eigen::VectorXd random_function(int n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = rng.uniform(lo, hi);
    return f;
}

/// All connected unlabeled graphs with up to max_n vertices, one canonical
/// representative each (canonical form: minimal adjacency bitmask over all
/// vertex permutations).
inline std::vector<Graph> all_connected_graphs(int max_n) {
    std::vector<Graph> out;
    for (int n = 1; n <= max_n; ++n) {
        const int n_pairs = n * (n - 1) / 2;
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

        std::vector<int> perm(n);
        std::vector<std::vector<int>> perms;
        for (int i = 0; i < n; ++i) perm[i] = i;
        do {
            perms.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));

        // pair index lookup
        std::vector<std::vector<int>> pair_index(n, std::vector<int>(n, -1));
        for (int k = 0; k < n_pairs; ++k) {
            pair_index[pairs[k].first][pairs[k].second] = k;
            pair_index[pairs[k].second][pairs[k].first] = k;
        }

        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_pairs); ++mask) {
            Graph g;
            g.n_vertices = n;
            for (int k = 0; k < n_pairs; ++k)
                if (mask & (std::uint64_t{1} << k)) g.edges.push_back(pairs[k]);
            if (g.n_components() != 1) continue;

            // keep the orbit's minimal mask as the representative
            std::uint64_t canon = ~std::uint64_t{0};
            for (const auto& p : perms) {
                std::uint64_t m = 0;
                for (int k = 0; k < n_pairs; ++k)
                    if (mask & (std::uint64_t{1} << k))
                        m |= std::uint64_t{1} << pair_index[p[pairs[k].first]][p[pairs[k].second]];
                canon = std::min(canon, m);
            }
            if (canon == mask) out.push_back(g);
        }
    }
    return out;
}

/// Location of TUDataset-format data; overridable for CI layouts.
inline std::string data_root() {
    if (const char* env = std::getenv("WAVPERS_DATA_ROOT")) return env;
    return "data";
}

inline bool dataset_on_disk(const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path root(data_root());
    return fs::exists(root / (name + "_A.txt")) ||
           fs::exists(root / name / (name + "_A.txt"));
}

} // namespace wavpers::testing

#endif // WAVPERS_TESTS_TEST_UTIL_HPP
