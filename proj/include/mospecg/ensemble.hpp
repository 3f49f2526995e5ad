#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <string>
#include <vector>

#include "mospecg/common.hpp"
#include "mospecg/graph.hpp"
#include "mospecg/memetic.hpp"
#include "mospecg/mospecg.hpp"

namespace mospecg {

/// Symmetric co-occurrence matrix over the solution set, normalized to [0,1]
/// and thresholded at tau (with the per-row argmax entry protected).
struct ConsensusMatrix {
    Eigen::MatrixXd e;
    double tau = 0.5;
};

/// Build the consensus matrix from the sweep results: the two gamma extremes
/// (first and last grid entries) are dropped, co-membership is counted over
/// the remaining partitions and normalized by their number, and entries below
/// tau are zeroed -- except that for every vertex the entry to its strongest
/// partner survives, applied symmetrically so the matrix stays symmetric.
inline ConsensusMatrix build_consensus(const SolutionSet& set, double tau) {
    if (tau < 0.0 || tau > 1.0) throw DataError("tau must lie in [0,1]");
    std::vector<const Partition*> used;
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
        if (i == 0 || i + 1 == set.entries.size()) continue;  // drop the extremes
        if (set.entries[i].failed) continue;
        used.push_back(&set.entries[i].partition);
    }
    if (used.empty()) throw DataError("build_consensus: fewer than 3 usable entries");
    const int n = used.front()->n();

    ConsensusMatrix cm;
    cm.tau = tau;
    cm.e = Eigen::MatrixXd::Zero(n, n);
    for (const Partition* part : used)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                if (part->labels[i] == part->labels[j]) {
                    cm.e(i, j) += 1.0;
                    cm.e(j, i) = cm.e(i, j);
                }
    cm.e /= static_cast<double>(used.size());
    for (int i = 0; i < n; ++i) cm.e(i, i) = 1.0;

    // Strongest off-diagonal partner of each vertex (ties to the lowest id).
    std::vector<int> argmax(n, -1);
    for (int i = 0; i < n; ++i) {
        double best = -1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (cm.e(i, j) > best) {
                best = cm.e(i, j);
                argmax[i] = j;
            }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const bool protected_entry = (argmax[i] == j) || (argmax[j] == i);
            if (cm.e(i, j) < tau && !protected_entry) cm.e(i, j) = 0.0;
        }
    return cm;
}

/// Adjusted weighted graph A + E (diagonal excluded so that no self-loops
/// are introduced); strengths and 2m are recomputed from the new weights.
inline Graph adjusted_graph(const Graph& g, const ConsensusMatrix& cm) {
    const int n = g.n;
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (const auto& [u, v, wt] : g.edges) w[u][v] = w[v][u] = wt;
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double wij = w[i][j] + cm.e(i, j);
            if (wij > 0.0) edges.emplace_back(i, j, wij);
        }
    return make_graph(n, edges);
}

/// SpecG-EC: consensus-reweight the graph, then run one memetic optimization
/// of classical modularity (gamma1 = gamma2 = 0.5) on the adjusted graph and
/// return the fittest partition with compacted labels.
///
/// The cluster-count budget comes from the original graph's modularity
/// spectrum, not the adjusted one: consensus reweighting concentrates the
/// spectrum on the dominant eigenvalue, which drives the sqrt(chi) cutoff
/// above every other eigenvalue and would collapse the estimate to 1. The
/// budget is additionally floored at the largest cluster count among the
/// partitions that built the consensus, so the search can always represent
/// the consensus structure itself.
inline Partition run_specg_ec(const Graph& g, const SolutionSet& set, double tau,
                              const MemeticParams& memetic, const PSpec& p_spec,
                              std::uint64_t rng_seed) {
    const ConsensusMatrix cm = build_consensus(set, tau);
    const Graph adj = adjusted_graph(g, cm);
    const GammaPair gamma(0.5, 0.5);
    const SpectralContext orig_ctx = make_context(g, gamma, p_spec.resolve(g.n));
    const SpectralContext ctx = make_context(adj, gamma, p_spec.resolve(adj.n));
    int k = orig_ctx.k_estimate;
    for (std::size_t i = 1; i + 1 < set.entries.size(); ++i)
        if (!set.entries[i].failed) k = std::max(k, set.entries[i].partition.k);
    MemeticParams mp = memetic;
    mp.rng_seed = mix_seed(rng_seed, 0x636f6e73ULL);  // distinct stream from the sweep
    const Individual best = evolve(ctx, k, mp);
    return compact_labels(best.labels);
}

/// Dump the consensus matrix as dense CSV for inspection.
inline void write_consensus_csv(const ConsensusMatrix& cm, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write consensus CSV: " + path);
    out.precision(12);
    const int n = static_cast<int>(cm.e.rows());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out << cm.e(i, j) << (j + 1 < n ? ',' : '\n');
    }
}

}  // namespace mospecg
