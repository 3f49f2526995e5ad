#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "mospecg/common.hpp"
#include "mospecg/graph.hpp"
#include "mospecg/partition.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(DATA_DIR) + "/" + name; }

/// Two triangles joined by a single bridge edge (2-3); the modularity optimum
/// is the pair of triangles.
inline mospecg::Graph two_triangles() {
    return mospecg::load_edge_list(data_path("two_triangles.txt"));
}

inline mospecg::Graph k2() { return mospecg::make_graph(2, {{0, 1, 1.0}}); }

inline mospecg::Graph path3() { return mospecg::make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

inline mospecg::Graph karate() { return mospecg::load_edge_list(data_path("karate.txt")); }

inline mospecg::Graph dolphins() { return mospecg::load_edge_list(data_path("dolphins.txt")); }

inline mospecg::Partition karate_truth(const mospecg::Graph& g) {
    return mospecg::load_membership(data_path("karate.cmty"), g.n);
}

inline mospecg::Partition dolphins_truth(const mospecg::Graph& g) {
    return mospecg::load_membership(data_path("dolphins.cmty"), g.n);
}

/// Uniform random labeling with exactly `k` label values available (labels may
/// be unused); compacted before return.
inline mospecg::Partition random_partition(int n, int k, mospecg::Rng& rng) {
    std::vector<int> labels(n);
    for (int v = 0; v < n; ++v) labels[v] = static_cast<int>(mospecg::rand_below(rng, k));
    return mospecg::compact_labels(labels);
}

/// Random connected simple graph: a random spanning tree plus extra random
/// edges, unit weights.
inline mospecg::Graph random_connected_graph(int n, int extra_edges, mospecg::Rng& rng) {
    std::vector<std::tuple<int, int, double>> edges;
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(mospecg::rand_below(rng, v));
        edges.emplace_back(u, v, 1.0);
        used[u][v] = used[v][u] = true;
    }
    for (int t = 0; t < extra_edges; ++t) {
        const int u = static_cast<int>(mospecg::rand_below(rng, n));
        const int v = static_cast<int>(mospecg::rand_below(rng, n));
        if (u == v || used[u][v]) continue;
        edges.emplace_back(u, v, 1.0);
        used[u][v] = used[v][u] = true;
    }
    return mospecg::make_graph(n, edges);
}

}  // namespace testing
