#pragma once

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

#include "mospecg/common.hpp"
#include "mospecg/graph.hpp"
#include "mospecg/spectral.hpp"

namespace mospecg {
namespace oracle {

/// Exhaustive search for the best objective value over all set partitions of
/// the vertex set, enumerated as restricted growth strings. Intended for
/// test fixtures only: n is capped at 12 (Bell(12) ~ 4.2M partitions).
inline std::pair<double, Partition> enumerate_optimal(const Graph& g, const GammaPair& gamma) {
    if (g.n > 12) throw DataError("enumerate_optimal: n must be <= 12");
    const int n = g.n;
    std::vector<int> rgs(n, 0);   // restricted growth string
    std::vector<int> maxv(n, 0);  // maxv[i] = 1 + max(rgs[0..i-1])
    double best = -std::numeric_limits<double>::infinity();
    Partition best_part;

    // Iterative enumeration: rgs[0] = 0 fixed; rgs[i] ranges over [0, maxv[i]].
    int i = 1;
    maxv[0] = 1;
    if (n == 1) {
        best_part = Partition({0}, 1);
        return {qw_exact(g, gamma, best_part), best_part};
    }
    rgs[1] = -1;
    maxv[1] = 1;
    while (i >= 1) {
        if (rgs[i] < maxv[i]) {
            rgs[i]++;
            if (i + 1 < n) {
                ++i;
                maxv[i] = std::max(maxv[i - 1], rgs[i - 1] + 1);
                rgs[i] = -1;
            } else {
                int k = 0;
                for (int v = 0; v < n; ++v) k = std::max(k, rgs[v] + 1);
                const Partition part(rgs, k);
                const double qw = qw_exact(g, gamma, part);
                if (qw > best) {
                    best = qw;
                    best_part = part;
                }
            }
        } else {
            --i;
        }
    }
    return {best, best_part};
}

/// Count the partitions enumerate_optimal visits (the Bell number of n);
/// used by tests to confirm the enumeration is exhaustive and duplicate-free.
inline long long count_partitions(int n) {
    std::vector<std::vector<long long>> tri(n + 1);
    tri[0] = {1};
    for (int r = 1; r <= n; ++r) {
        tri[r].resize(r + 1);
        tri[r][0] = tri[r - 1][r - 1];
        for (int c = 1; c <= r; ++c) tri[r][c] = tri[r][c - 1] + tri[r - 1][c - 1];
    }
    return tri[n][0];
}

/// From-scratch recomputation of cluster vectors; the reference against which
/// the incremental bookkeeping is checked.
inline ClusterVectors recompute_cluster_vectors(const SpectralContext& ctx,
                                                const std::vector<int>& labels, int k) {
    return make_cluster_vectors(ctx, labels, k);
}

}  // namespace oracle
}  // namespace mospecg
