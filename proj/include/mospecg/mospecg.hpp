#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mospecg/common.hpp"
#include "mospecg/graph.hpp"
#include "mospecg/memetic.hpp"
#include "mospecg/metrics.hpp"
#include "mospecg/spectral.hpp"

namespace mospecg {

/// Result of one gamma grid point.
struct SolutionEntry {
    GammaPair gamma;
    Partition partition;  // compacted labels
    double q_in_value = 0.0;
    double q_null_value = 0.0;
    double qw = 0.0;  // exact weighted aggregate objective
    double q = 0.0;   // classical modularity
    int k_found = 0;
    int k_estimated = 0;
    std::optional<double> nmi_value;
    double runtime_seconds = 0.0;
    bool failed = false;
    std::string error;
};

/// The N_F entries of the gamma sweep, ordered by gamma1 ascending.
struct SolutionSet {
    std::vector<SolutionEntry> entries;
    int nf = 0;
};

/// Number of retained eigenpairs: either a fraction of n or an absolute count.
struct PSpec {
    double fraction = 0.1;
    int absolute = 0;  // > 0 overrides the fraction

    int resolve(int n) const {
        const int p = absolute > 0 ? absolute : static_cast<int>(std::floor(fraction * n));
        return std::max(1, std::min(p, n));
    }
};

namespace detail {

inline SolutionEntry run_entry(const Graph& g, const GammaPair& gamma, int grid_index,
                               const MemeticParams& memetic, int p, std::uint64_t rng_seed,
                               const Partition* truth) {
    SolutionEntry entry;
    entry.gamma = gamma;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const SpectralContext ctx = make_context(g, gamma, p);
        MemeticParams mp = memetic;
        mp.rng_seed = mix_seed(rng_seed, static_cast<std::uint64_t>(grid_index));
        const Individual best = evolve(ctx, ctx.k_estimate, mp);
        entry.partition = compact_labels(best.labels);
        entry.k_found = entry.partition.k;
        entry.k_estimated = ctx.k_estimate;
        entry.q_in_value = q_in(g, entry.partition);
        entry.q_null_value = q_null(g, entry.partition);
        entry.qw = gamma.gamma1 * entry.q_in_value - gamma.gamma2 * entry.q_null_value;
        entry.q = entry.q_in_value - entry.q_null_value;
        if (truth != nullptr) entry.nmi_value = nmi(entry.partition, *truth);
    } catch (const std::exception& e) {
        entry.failed = true;
        entry.error = e.what();
    }
    entry.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return entry;
}

}  // namespace detail

/// Sweep the gamma grid: gamma1 = i/(nf-1) for i = 0..nf-1, one memetic run
/// per point, each seeded from (rng_seed, grid index) so that serial and
/// parallel sweeps produce identical results. A failed entry (eigensolver
/// trouble) is recorded as such without aborting the sweep.
inline SolutionSet run_mospecg(const Graph& g, int nf, const MemeticParams& memetic,
                               const PSpec& p_spec, std::uint64_t rng_seed,
                               const Partition* truth = nullptr, int workers = 1) {
    if (nf < 2) throw DataError("run_mospecg: nf must be >= 2");
    memetic.validate();
    const int p = p_spec.resolve(g.n);
    SolutionSet set;
    set.nf = nf;
    set.entries.resize(nf);

    const auto work = [&](int i) {
        const GammaPair gamma = GammaPair::from_gamma1(static_cast<double>(i) / (nf - 1));
        set.entries[i] = detail::run_entry(g, gamma, i, memetic, p, rng_seed, truth);
    };
    if (workers <= 1) {
        for (int i = 0; i < nf; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < std::min(workers, nf); ++t)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < nf; i = next.fetch_add(1)) work(i);
            });
        for (std::thread& th : pool) th.join();
    }
    return set;
}

/// Nondominated subset under the bi-objective dominance order: a dominates b
/// iff a is at least as good in both of (maximize Q_in, minimize Q_null) and
/// strictly better in one. The input set is left untouched.
inline std::vector<const SolutionEntry*> pareto_filter(const SolutionSet& set) {
    std::vector<const SolutionEntry*> out;
    for (const SolutionEntry& a : set.entries) {
        if (a.failed) continue;
        bool dominated = false;
        for (const SolutionEntry& b : set.entries) {
            if (&a == &b || b.failed) continue;
            const bool dom = (b.q_in_value > a.q_in_value && b.q_null_value <= a.q_null_value) ||
                             (b.q_in_value >= a.q_in_value && b.q_null_value < a.q_null_value);
            if (dom) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(&a);
    }
    return out;
}

/// Fixed CSV schema for the sweep results.
inline void write_solutions_csv(const SolutionSet& set, std::ostream& out) {
    out << "gamma1,gamma2,q_in,q_null,qw,q,k_estimated,k_found,nmi,runtime_seconds\n";
    out << std::setprecision(12);
    for (const SolutionEntry& e : set.entries) {
        out << e.gamma.gamma1 << ',' << e.gamma.gamma2 << ',';
        if (e.failed) {
            out << ",,,,,,," << e.runtime_seconds << '\n';
            continue;
        }
        out << e.q_in_value << ',' << e.q_null_value << ',' << e.qw << ',' << e.q << ','
            << e.k_estimated << ',' << e.k_found << ',';
        if (e.nmi_value) out << *e.nmi_value;
        out << ',' << e.runtime_seconds << '\n';
    }
}

inline void write_solutions_csv(const SolutionSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write CSV: " + path);
    write_solutions_csv(set, out);
}

}  // namespace mospecg
