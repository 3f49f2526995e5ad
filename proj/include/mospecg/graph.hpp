#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mospecg/common.hpp"
#include "mospecg/partition.hpp"

namespace mospecg {

/// Undirected, optionally weighted graph with contiguous 0-based vertex ids.
struct Graph {
    int n = 0;
    /// Edges as (u, v, w) with u < v and w > 0.
    std::vector<std::tuple<int, int, double>> edges;
    /// adjacency[i] = list of (neighbor, weight).
    std::vector<std::vector<std::pair<int, double>>> adjacency;
    /// strength[i] = sum of incident edge weights (degree for unweighted input).
    std::vector<double> strength;
    /// 2m = sum of all strengths = twice the total edge weight.
    double total_weight_2m = 0.0;
};

enum class IndexBase { Auto, Zero, One };

/// Build a Graph from an edge list with ids already in [0, n).
/// Self-loops and duplicate undirected edges are rejected.
inline Graph make_graph(int n, const std::vector<std::tuple<int, int, double>>& edges) {
    if (n <= 0) throw DataError("graph has no vertices");
    Graph g;
    g.n = n;
    g.adjacency.resize(n);
    g.strength.assign(n, 0.0);
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b, w] : edges) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw DataError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                            ") out of range for n=" + std::to_string(n));
        if (a == b) throw DataError("self-loop at vertex " + std::to_string(a));
        const int u = std::min(a, b), v = std::max(a, b);
        if (!seen.insert({u, v}).second)
            throw DataError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        if (!(w > 0.0) || !std::isfinite(w))
            throw DataError("non-positive or non-finite weight on edge (" + std::to_string(u) +
                            "," + std::to_string(v) + ")");
        g.edges.emplace_back(u, v, w);
        g.adjacency[u].emplace_back(v, w);
        g.adjacency[v].emplace_back(u, w);
        g.strength[u] += w;
        g.strength[v] += w;
        g.total_weight_2m += 2.0 * w;
    }
    if (g.edges.empty()) throw DataError("graph has no edges");
    return g;
}

/// Weight of edge (u,v), 0 if absent. Linear scan; fine for sparse graphs.
inline double edge_weight(const Graph& g, int u, int v) {
    for (const auto& [nb, w] : g.adjacency[u])
        if (nb == v) return w;
    return 0.0;
}

namespace detail {

inline bool is_blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace detail

/// Load a whitespace-separated edge list ("u v" or "u v w"; '#' starts a comment).
/// With IndexBase::Auto, ids are shifted down by one iff the minimum id is 1,
/// which handles both 0-based edge lists and 1-based LFR network.dat files.
inline Graph load_edge_list(const std::string& path, IndexBase base = IndexBase::Auto) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list: " + path);
    struct RawEdge {
        long long u, v;
        double w;
    };
    std::vector<RawEdge> raw;
    long long min_id = std::numeric_limits<long long>::max();
    long long max_id = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank_or_comment(line)) continue;
        std::istringstream ls(line);
        RawEdge e{0, 0, 1.0};
        if (!(ls >> e.u >> e.v))
            throw DataError(path + ":" + std::to_string(lineno) + ": malformed edge line");
        if (!(ls >> e.w)) e.w = 1.0;
        std::string extra;
        if (ls >> extra)
            throw DataError(path + ":" + std::to_string(lineno) + ": trailing tokens");
        if (e.u < 0 || e.v < 0)
            throw DataError(path + ":" + std::to_string(lineno) + ": negative vertex id");
        raw.push_back(e);
        min_id = std::min(min_id, std::min(e.u, e.v));
        max_id = std::max(max_id, std::max(e.u, e.v));
    }
    if (raw.empty()) throw DataError("empty graph: " + path);
    long long shift = 0;
    if (base == IndexBase::One || (base == IndexBase::Auto && min_id == 1)) shift = 1;
    if (min_id - shift < 0) throw DataError(path + ": vertex id below the declared index base");
    std::vector<std::tuple<int, int, double>> edges;
    edges.reserve(raw.size());
    for (const RawEdge& e : raw)
        edges.emplace_back(static_cast<int>(e.u - shift), static_cast<int>(e.v - shift), e.w);
    return make_graph(static_cast<int>(max_id - shift + 1), edges);
}

/// Write the graph back out in the same edge-list format.
inline void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write edge list: " + path);
    out.precision(17);
    for (const auto& [u, v, w] : g.edges) {
        out << u << ' ' << v;
        if (w != 1.0) out << ' ' << w;
        out << '\n';
    }
}

/// Load a membership file ("vertex_id community_id" per line) covering every
/// vertex in [0, n) exactly once. Labels are compacted to 0-based cluster ids.
inline Partition load_membership(const std::string& path, int n, IndexBase base = IndexBase::Auto) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open membership file: " + path);
    std::vector<std::pair<long long, long long>> rows;
    long long min_id = std::numeric_limits<long long>::max();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank_or_comment(line)) continue;
        std::istringstream ls(line);
        long long v, c;
        if (!(ls >> v >> c))
            throw DataError(path + ":" + std::to_string(lineno) + ": malformed membership line");
        rows.emplace_back(v, c);
        min_id = std::min(min_id, v);
    }
    if (rows.empty()) throw DataError("empty membership file: " + path);
    long long shift = 0;
    if (base == IndexBase::One || (base == IndexBase::Auto && min_id == 1)) shift = 1;
    std::vector<int> labels(n, -1);
    for (const auto& [v_raw, c] : rows) {
        const long long v = v_raw - shift;
        if (v < 0 || v >= n)
            throw DataError(path + ": vertex id " + std::to_string(v_raw) + " out of range");
        if (labels[v] != -1)
            throw DataError(path + ": duplicate entry for vertex " + std::to_string(v_raw));
        labels[v] = static_cast<int>(c);
    }
    for (int i = 0; i < n; ++i)
        if (labels[i] == -1)
            throw DataError(path + ": vertex " + std::to_string(i) + " has no community");
    return compact_labels(labels);
}

/// Write a partition in membership format ("vertex cluster" per line).
inline void save_membership(const Partition& part, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write membership file: " + path);
    for (int i = 0; i < part.n(); ++i) out << i << ' ' << part.labels[i] << '\n';
}

}  // namespace mospecg
