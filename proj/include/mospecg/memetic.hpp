#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mospecg/common.hpp"
#include "mospecg/spectral.hpp"

namespace mospecg {

/// One member of the population: a k-labeled assignment with its incrementally
/// maintained cluster vectors and cached spectral objective value.
struct Individual {
    std::vector<int> labels;  // values in [0, k); empty clusters keep their ids
    ClusterVectors cv;
    double fitness = 0.0;
};

struct MemeticParams {
    int n_generations = 50;   // NG
    int pop_size = 5;         // NP
    int offspring_pct = 40;   // NO, percentage of the population replaced
    int local_search_iters = 5;  // IT sweeps per local-search call
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (n_generations < 1) throw DataError("n_generations must be >= 1");
        if (pop_size < 2) throw DataError("pop_size must be >= 2");
        if (offspring_pct < 1 || offspring_pct > 100)
            throw DataError("offspring_pct must be in (0, 100]");
        if (local_search_iters < 0) throw DataError("local_search_iters must be >= 0");
    }
};

/// Seed a fresh individual: k distinct random seed vertices, one per cluster,
/// then the remaining vertices in random order each joining the cluster with
/// the best greedy score.
inline Individual init_individual(const SpectralContext& ctx, int k, Rng& rng) {
    const int n = ctx.n;
    if (k < 1 || k > n) throw DataError("init_individual: k out of range");
    Individual ind;
    ind.labels.assign(n, -1);
    ind.cv.Rp = Eigen::MatrixXd::Zero(k, ctx.p);
    ind.cv.Rn = Eigen::MatrixXd::Zero(k, ctx.p);
    ind.cv.sizes.assign(k, 0);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates: the first k entries become the seed vertices, and
    // the remaining entries end up in random order for greedy assignment.
    for (int i = 0; i < n - 1; ++i)
        std::swap(order[i], order[i + static_cast<int>(rand_below(rng, n - i))]);
    for (int t = 0; t < k; ++t) {
        const int v = order[t];
        ind.labels[v] = t;
        ind.cv.Rp.row(t) += ctx.rp.row(v);
        ind.cv.Rn.row(t) += ctx.rn.row(v);
        ind.cv.sizes[t]++;
    }
    for (int i = k; i < n; ++i) {
        const int v = order[i];
        const int t = best_assignment(ctx, ind.cv, v);
        ind.labels[v] = t;
        ind.cv.Rp.row(t) += ctx.rp.row(v);
        ind.cv.Rn.row(t) += ctx.rn.row(v);
        ind.cv.sizes[t]++;
    }
    ind.fitness = qw_spectral(ctx, ind.cv);
    return ind;
}

namespace detail {

/// Fitness-proportionate index selection. Objective values can be negative or
/// all equal, so the weights are shifted to be strictly positive first; a
/// degenerate mass falls back to uniform selection.
inline int roulette(const std::vector<Individual>& pop, Rng& rng) {
    const int np = static_cast<int>(pop.size());
    double lo = pop[0].fitness, hi = pop[0].fitness;
    for (const Individual& ind : pop) {
        lo = std::min(lo, ind.fitness);
        hi = std::max(hi, ind.fitness);
    }
    const double shift = -lo + 1e-6 * (hi - lo + 1.0);
    double total = 0.0;
    for (const Individual& ind : pop) total += ind.fitness + shift;
    if (!(total > 0.0) || !std::isfinite(total)) return static_cast<int>(rand_below(rng, np));
    double x = rand_unit(rng) * total;
    for (int h = 0; h < np; ++h) {
        x -= pop[h].fitness + shift;
        if (x < 0.0) return h;
    }
    return np - 1;
}

}  // namespace detail

/// Produce NP offspring. Each child copies one parent and receives one whole
/// cluster transplanted from another: the donor cluster is merged into the
/// receiving cluster whose vectors align best with it (largest sum of the
/// Rp and Rn inner products), vertex by vertex with incremental updates.
inline std::vector<Individual> crossover(const std::vector<Individual>& pop,
                                         const SpectralContext& ctx, int k, Rng& rng) {
    const int np = static_cast<int>(pop.size());
    if (np < 2) throw DataError("crossover: population too small");
    std::vector<Individual> offspring;
    offspring.reserve(np);
    for (int f = 0; f < np; ++f) {
        const int b = detail::roulette(pop, rng);
        int d = b;
        while (d == b) d = detail::roulette(pop, rng);
        const Individual& donor = pop[b];
        Individual child = pop[d];

        const int vs = static_cast<int>(rand_below(rng, ctx.n));
        const int ls = donor.labels[vs];
        // Receiving cluster: argmax of Rp_b[ls].Rp_d[ld] + Rn_b[ls].Rn_d[ld],
        // ties to the lowest label.
        int ld_star = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int ld = 0; ld < k; ++ld) {
            const double score = donor.cv.Rp.row(ls).dot(child.cv.Rp.row(ld)) +
                                 donor.cv.Rn.row(ls).dot(child.cv.Rn.row(ld));
            if (score > best) {
                best = score;
                ld_star = ld;
            }
        }
        for (int v = 0; v < ctx.n; ++v) {
            if (donor.labels[v] != ls || child.labels[v] == ld_star) continue;
            apply_move(ctx, child.cv, v, child.labels[v], ld_star);
            child.labels[v] = ld_star;
        }
        child.fitness = qw_spectral(ctx, child.cv);
        offspring.push_back(std::move(child));
    }
    return offspring;
}

/// Relabel `count` random distinct vertices of one random individual, with
/// count drawn uniformly from [1, max(1, n/2)]. Each chosen vertex gets a
/// uniformly random cluster id (a no-op when it already has it).
inline void mutate(std::vector<Individual>& offspring, const SpectralContext& ctx, int k,
                   Rng& rng) {
    if (offspring.empty()) throw DataError("mutate: empty offspring set");
    const int n = ctx.n;
    const int upper = std::max(1, n / 2);
    const int count = 1 + static_cast<int>(rand_below(rng, upper));
    Individual& ind = offspring[rand_below(rng, offspring.size())];

    std::vector<int> verts(n);
    std::iota(verts.begin(), verts.end(), 0);
    for (int i = 0; i < count; ++i)
        std::swap(verts[i], verts[i + static_cast<int>(rand_below(rng, n - i))]);
    for (int i = 0; i < count; ++i) {
        const int v = verts[i];
        const int r = static_cast<int>(rand_below(rng, k));
        if (r == ind.labels[v]) continue;
        apply_move(ctx, ind.cv, v, ind.labels[v], r);
        ind.labels[v] = r;
    }
    ind.fitness = qw_spectral(ctx, ind.cv);
}

/// IT sweeps of greedy single-vertex relocation over every individual.
/// Vertices are visited in ascending index order; a vertex moves only when
/// the relocation improves the objective, so fitness never decreases.
inline void local_search(std::vector<Individual>& offspring, const SpectralContext& ctx,
                         int iters) {
    for (Individual& ind : offspring) {
        for (int sweep = 0; sweep < iters; ++sweep) {
            bool moved = false;
            for (int v = 0; v < ctx.n; ++v) {
                const int cur = ind.labels[v];
                const int t = best_target(ctx, ind.cv, v, cur);
                if (t != cur) {
                    apply_move(ctx, ind.cv, v, cur, t);
                    ind.labels[v] = t;
                    moved = true;
                }
            }
            if (!moved) break;
        }
        ind.fitness = qw_spectral(ctx, ind.cv);
    }
}

/// Full memetic loop: NG generations of crossover, mutation, and local search,
/// with the ceil(NO% * NP) fittest offspring replacing the equally many
/// least-fit incumbents. Returns the fittest individual of the final
/// population. Deterministic for a fixed seed.
inline Individual evolve(const SpectralContext& ctx, int k, const MemeticParams& params) {
    params.validate();
    Rng rng(params.rng_seed);
    const int np = params.pop_size;
    std::vector<Individual> pop;
    pop.reserve(np);
    for (int h = 0; h < np; ++h) pop.push_back(init_individual(ctx, k, rng));

    const int n_replace =
        static_cast<int>(std::ceil(params.offspring_pct * np / 100.0));
    for (int gen = 0; gen < params.n_generations; ++gen) {
        std::vector<Individual> offspring = crossover(pop, ctx, k, rng);
        mutate(offspring, ctx, k, rng);
        local_search(offspring, ctx, params.local_search_iters);

        // Index-based stable ordering keeps replacement deterministic on ties.
        std::vector<int> off_order(offspring.size());
        std::iota(off_order.begin(), off_order.end(), 0);
        std::stable_sort(off_order.begin(), off_order.end(), [&](int a, int b) {
            return offspring[a].fitness > offspring[b].fitness;
        });
        std::vector<int> pop_order(np);
        std::iota(pop_order.begin(), pop_order.end(), 0);
        std::stable_sort(pop_order.begin(), pop_order.end(), [&](int a, int b) {
            return pop[a].fitness < pop[b].fitness;
        });
        for (int r = 0; r < n_replace; ++r)
            pop[pop_order[r]] = std::move(offspring[off_order[r]]);
    }
    int best = 0;
    for (int h = 1; h < np; ++h)
        if (pop[h].fitness > pop[best].fitness) best = h;
    return pop[best];
}

}  // namespace mospecg
