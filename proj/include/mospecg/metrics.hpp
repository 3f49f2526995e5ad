#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mospecg/graph.hpp"
#include "mospecg/partition.hpp"

namespace mospecg {

/// Fraction of edge weight that falls inside clusters:
/// (1/2m) * sum over same-cluster ordered pairs (i,j) of w_ij.
inline double q_in(const Graph& g, const Partition& part) {
    double internal = 0.0;
    for (const auto& [u, v, w] : g.edges)
        if (part.labels[u] == part.labels[v]) internal += 2.0 * w;
    return internal / g.total_weight_2m;
}

/// Expected internal fraction under the degree-preserving null model:
/// (1/2m) * sum over same-cluster pairs of s_i*s_j/(2m) = sum_t S_t^2/(2m)^2.
inline double q_null(const Graph& g, const Partition& part) {
    std::vector<double> cluster_strength(part.k, 0.0);
    for (int i = 0; i < g.n; ++i) cluster_strength[part.labels[i]] += g.strength[i];
    double acc = 0.0;
    for (double s : cluster_strength) acc += s * s;
    return acc / (g.total_weight_2m * g.total_weight_2m);
}

/// Classical modularity Q = Q_in - Q_null.
inline double modularity(const Graph& g, const Partition& part) {
    return q_in(g, part) - q_null(g, part);
}

/// Normalized mutual information, 2*I/(H_a + H_b) with natural-log entropies.
/// Degenerate cases: both partitions trivial (one cluster) -> 1; exactly one
/// trivial -> 0 (no information shared with a constant labeling).
inline double nmi(const Partition& pa, const Partition& pb) {
    if (pa.n() != pb.n()) throw DataError("nmi: partitions have different sizes");
    const int n = pa.n();
    if (pa.k <= 1 && pb.k <= 1) return 1.0;
    if (pa.k <= 1 || pb.k <= 1) return 0.0;
    std::vector<double> ca(pa.k, 0.0), cb(pb.k, 0.0);
    std::vector<std::vector<double>> joint(pa.k, std::vector<double>(pb.k, 0.0));
    for (int i = 0; i < n; ++i) {
        ca[pa.labels[i]] += 1.0;
        cb[pb.labels[i]] += 1.0;
        joint[pa.labels[i]][pb.labels[i]] += 1.0;
    }
    const double dn = static_cast<double>(n);
    double ha = 0.0, hb = 0.0, mi = 0.0;
    for (double c : ca)
        if (c > 0.0) ha -= (c / dn) * std::log(c / dn);
    for (double c : cb)
        if (c > 0.0) hb -= (c / dn) * std::log(c / dn);
    for (int a = 0; a < pa.k; ++a)
        for (int b = 0; b < pb.k; ++b) {
            const double nij = joint[a][b];
            if (nij > 0.0) mi += (nij / dn) * std::log(nij * dn / (ca[a] * cb[b]));
        }
    if (ha + hb == 0.0) return 1.0;
    return 2.0 * mi / (ha + hb);
}

struct PairAgreement {
    /// Unordered pairs co-clustered in both partitions.
    std::int64_t correct_together = 0;
    /// Unordered pairs co-clustered in exactly one of the two.
    std::int64_t wrong = 0;
};

/// Count pairwise agreement between two partitions over all unordered pairs.
inline PairAgreement pair_agreement(const Partition& pa, const Partition& pb) {
    if (pa.n() != pb.n()) throw DataError("pair_agreement: partitions have different sizes");
    const int n = pa.n();
    // together(X) = sum over clusters of C(size,2); together in both via the
    // joint contingency table, all in O(n + k_a*k_b).
    auto pairs2 = [](std::int64_t c) { return c * (c - 1) / 2; };
    std::vector<std::int64_t> ca(pa.k, 0), cb(pb.k, 0);
    std::vector<std::vector<std::int64_t>> joint(pa.k, std::vector<std::int64_t>(pb.k, 0));
    for (int i = 0; i < n; ++i) {
        ca[pa.labels[i]]++;
        cb[pb.labels[i]]++;
        joint[pa.labels[i]][pb.labels[i]]++;
    }
    std::int64_t both = 0, in_a = 0, in_b = 0;
    for (auto c : ca) in_a += pairs2(c);
    for (auto c : cb) in_b += pairs2(c);
    for (int a = 0; a < pa.k; ++a)
        for (int b = 0; b < pb.k; ++b) both += pairs2(joint[a][b]);
    PairAgreement out;
    out.correct_together = both;
    out.wrong = (in_a - both) + (in_b - both);
    return out;
}

}  // namespace mospecg
