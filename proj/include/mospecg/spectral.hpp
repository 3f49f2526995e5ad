#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mospecg/common.hpp"
#include "mospecg/graph.hpp"
#include "mospecg/metrics.hpp"
#include "mospecg/partition.hpp"

namespace mospecg {

/// Weights of the two modularity terms; gamma1 + gamma2 = 1.
struct GammaPair {
    double gamma1 = 0.5;
    double gamma2 = 0.5;

    GammaPair() = default;
    GammaPair(double g1, double g2) : gamma1(g1), gamma2(g2) {
        if (std::abs(gamma1 + gamma2 - 1.0) > 1e-12)
            throw DataError("gamma1 + gamma2 must equal 1");
        if (gamma1 < 0.0 || gamma1 > 1.0) throw DataError("gamma1 must lie in [0,1]");
    }
    static GammaPair from_gamma1(double g1) { return GammaPair(g1, 1.0 - g1); }
};

/// Dense weighted aggregate modularity matrix:
/// bw_ij = gamma1*w_ij - gamma2*s_i*s_j/(2m).
inline Eigen::MatrixXd build_bw(const Graph& g, const GammaPair& gamma) {
    const int n = g.n;
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s(i) = g.strength[i];
    Eigen::MatrixXd bw = -(gamma.gamma2 / g.total_weight_2m) * (s * s.transpose());
    for (const auto& [u, v, w] : g.edges) {
        bw(u, v) += gamma.gamma1 * w;
        bw(v, u) += gamma.gamma1 * w;
    }
    return bw;
}

/// Matrix-free application of BW: y = gamma1*(A*x) - gamma2*(s'x/2m)*s.
/// Lets the iterative eigensolver run without materializing the dense
/// null-model term.
struct BwOperator {
    const Graph* g;
    GammaPair gamma;

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        const int n = g->n;
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (const auto& [u, v, w] : g->edges) {
            y(u) += gamma.gamma1 * w * x(v);
            y(v) += gamma.gamma1 * w * x(u);
        }
        double sx = 0.0;
        for (int i = 0; i < n; ++i) sx += g->strength[i] * x(i);
        const double c = gamma.gamma2 * sx / g->total_weight_2m;
        for (int i = 0; i < n; ++i) y(i) -= c * g->strength[i];
        return y;
    }
};

namespace detail {

/// Sort index permutation of eigenvalues by decreasing |lambda|,
/// breaking ties toward the algebraically larger value.
inline std::vector<int> abs_order(const Eigen::VectorXd& evals) {
    std::vector<int> idx(evals.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        const double aa = std::abs(evals(a)), ab = std::abs(evals(b));
        if (aa != ab) return aa > ab;
        return evals(a) > evals(b);
    });
    return idx;
}

}  // namespace detail

/// Full dense symmetric eigendecomposition, returning all n eigenpairs
/// sorted by decreasing |lambda|.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> eigen_all_abs(const Eigen::MatrixXd& bw) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(bw);
    if (solver.info() != Eigen::Success)
        throw NumericalError("dense symmetric eigendecomposition failed");
    const auto idx = detail::abs_order(solver.eigenvalues());
    const int n = static_cast<int>(bw.rows());
    Eigen::VectorXd evals(n);
    Eigen::MatrixXd evecs(n, n);
    for (int j = 0; j < n; ++j) {
        evals(j) = solver.eigenvalues()(idx[j]);
        evecs.col(j) = solver.eigenvectors().col(idx[j]);
    }
    return {evals, evecs};
}

/// The p eigenpairs of largest |lambda| of a dense symmetric matrix.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> eigen_top_abs(const Eigen::MatrixXd& bw,
                                                                 int p) {
    const int n = static_cast<int>(bw.rows());
    if (p < 1 || p > n) throw DataError("eigen_top_abs: p out of range");
    if ((bw - bw.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw DataError("eigen_top_abs: matrix is not symmetric");
    auto [evals, evecs] = eigen_all_abs(bw);
    return {evals.head(p), evecs.leftCols(p)};
}

/// Lanczos iteration with full reorthogonalization on a matrix-free operator.
/// Returns Ritz pairs for the p largest-|lambda| eigenvalues. Throws
/// NumericalError when the requested residual accuracy is not reached; the
/// caller is expected to fall back to the dense path.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> lanczos_top_abs(const BwOperator& op, int n,
                                                                   int p, double tol,
                                                                   std::uint64_t seed = 12345) {
    const int steps = std::min(n, std::max(2 * p + 40, 80));
    Eigen::MatrixXd V(n, steps);
    std::vector<double> alpha, beta;
    Rng rng(seed);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rand_unit(rng) - 0.5;
    v.normalize();
    V.col(0) = v;
    Eigen::VectorXd w;
    int mdone = 0;
    for (int j = 0; j < steps; ++j) {
        w = op.apply(V.col(j));
        const double a = V.col(j).dot(w);
        alpha.push_back(a);
        w -= a * V.col(j);
        if (j > 0) w -= beta[j - 1] * V.col(j - 1);
        // Full reorthogonalization for numerical stability.
        for (int pass = 0; pass < 2; ++pass)
            w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
        const double b = w.norm();
        mdone = j + 1;
        if (b < 1e-14 || j + 1 == steps) break;
        beta.push_back(b);
        V.col(j + 1) = w / b;
    }
    // Eigen-decompose the tridiagonal Rayleigh quotient.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mdone, mdone);
    for (int i = 0; i < mdone; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < mdone) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tsolver(T);
    if (tsolver.info() != Eigen::Success) throw NumericalError("Lanczos tridiagonal solve failed");
    const auto idx = detail::abs_order(tsolver.eigenvalues());
    if (mdone < p) throw NumericalError("Lanczos terminated before finding p pairs");
    Eigen::VectorXd evals(p);
    Eigen::MatrixXd evecs(n, p);
    for (int j = 0; j < p; ++j) {
        evals(j) = tsolver.eigenvalues()(idx[j]);
        evecs.col(j) = V.leftCols(mdone) * tsolver.eigenvectors().col(idx[j]);
        evecs.col(j).normalize();
        const double resid = (op.apply(evecs.col(j)) - evals(j) * evecs.col(j)).norm();
        if (resid > tol) throw NumericalError("Lanczos residual too large");
    }
    return {evals, evecs};
}

/// Cluster-count upper bound from the spectrum of the classical modularity
/// matrix B: k' = #{lambda_j >= sqrt(chi)} with chi the largest (algebraic)
/// eigenvalue, then k = max(1, floor(1.25*k')). chi <= 0 degenerates to k=1.
inline int estimate_k(const std::vector<double>& eigenvalues, double chi) {
    if (chi <= 0.0) return 1;
    const double thresh = std::sqrt(chi);
    int kprime = 0;
    for (double l : eigenvalues)
        if (l >= thresh) ++kprime;
    return std::max(1, static_cast<int>(std::floor(1.25 * kprime)));
}

/// Eigenpairs of BW plus the per-vertex positive/negative vectors and the
/// cluster-count estimate. Immutable after construction.
struct SpectralContext {
    int n = 0;
    int p = 0;
    GammaPair gamma;
    double two_m = 0.0;
    /// p eigenvalues of BW sorted by decreasing |lambda|.
    Eigen::VectorXd eigenvalues;
    /// Corresponding orthonormal eigenvectors, n x p.
    Eigen::MatrixXd eigenvectors;
    /// rp(i,j) = sqrt(lambda_j)*u_ij for lambda_j >= 0, else 0.
    Eigen::MatrixXd rp;
    /// rn(i,j) = sqrt(-lambda_j)*u_ij for lambda_j < 0, else 0.
    Eigen::MatrixXd rn;
    /// Largest algebraic eigenvalue of the scaled matrix B = BW/gamma1
    /// (the classical modularity matrix; see make_context).
    double chi = 0.0;
    int k_estimate = 1;
};

/// Per-cluster sums of vertex vectors, maintained incrementally during search.
struct ClusterVectors {
    Eigen::MatrixXd Rp;  // k x p
    Eigen::MatrixXd Rn;  // k x p
    std::vector<int> sizes;

    int k() const { return static_cast<int>(sizes.size()); }
};

/// Direct summation of cluster vectors from a label assignment.
inline ClusterVectors make_cluster_vectors(const SpectralContext& ctx,
                                           const std::vector<int>& labels, int k) {
    ClusterVectors cv;
    cv.Rp = Eigen::MatrixXd::Zero(k, ctx.p);
    cv.Rn = Eigen::MatrixXd::Zero(k, ctx.p);
    cv.sizes.assign(k, 0);
    for (int i = 0; i < ctx.n; ++i) {
        const int t = labels[i];
        cv.Rp.row(t) += ctx.rp.row(i);
        cv.Rn.row(t) += ctx.rn.row(i);
        cv.sizes[t]++;
    }
    return cv;
}

/// Move vertex i between clusters in the incremental bookkeeping.
inline void apply_move(const SpectralContext& ctx, ClusterVectors& cv, int i, int from, int to) {
    if (from == to) return;
    cv.Rp.row(from) -= ctx.rp.row(i);
    cv.Rn.row(from) -= ctx.rn.row(i);
    cv.Rp.row(to) += ctx.rp.row(i);
    cv.Rn.row(to) += ctx.rn.row(i);
    cv.sizes[from]--;
    cv.sizes[to]++;
}

/// Spectral objective value: (1/2m) * sum_t (|Rp_t|^2 - |Rn_t|^2).
/// Exact when p = n, an approximation otherwise.
inline double qw_spectral(const SpectralContext& ctx, const ClusterVectors& cv) {
    return (cv.Rp.squaredNorm() - cv.Rn.squaredNorm()) / ctx.two_m;
}

/// Exact objective: (1/2m) * sum over same-cluster pairs of
/// [gamma1*w_ij - gamma2*s_i*s_j/(2m)]; equals gamma1*Q_in - gamma2*Q_null.
inline double qw_exact(const Graph& g, const GammaPair& gamma, const Partition& part) {
    return gamma.gamma1 * q_in(g, part) - gamma.gamma2 * q_null(g, part);
}

/// Objective change for moving vertex i from cluster `from` to cluster `to`:
/// (1/m)[Rp_to.rp_i - Rn_to.rn_i - Rp_from'.rp_i + Rn_from'.rn_i], where the
/// source cluster vectors exclude vertex i itself.
inline double move_gain(const SpectralContext& ctx, const ClusterVectors& cv, int i, int from,
                        int to) {
    if (from < 0 || from >= cv.k() || to < 0 || to >= cv.k())
        throw DataError("move_gain: cluster label out of range");
    if (from == to) return 0.0;
    const auto rpi = ctx.rp.row(i);
    const auto rni = ctx.rn.row(i);
    const double target = cv.Rp.row(to).dot(rpi) - cv.Rn.row(to).dot(rni);
    const double source = (cv.Rp.row(from) - rpi).dot(rpi) - (cv.Rn.row(from) - rni).dot(rni);
    return 2.0 * (target - source) / ctx.two_m;
}

/// Greedy relocation target for vertex i (currently labeled `current`):
/// the cluster maximizing Rp_t.rp_i - Rn_t.rn_i over t != current, with the
/// current cluster scored on the vectors excluding i itself. Returns the
/// current label when no move has positive gain; ties go to the lowest label.
inline int best_target(const SpectralContext& ctx, const ClusterVectors& cv, int i, int current) {
    const auto rpi = ctx.rp.row(i);
    const auto rni = ctx.rn.row(i);
    const double stay = (cv.Rp.row(current) - rpi).dot(rpi) - (cv.Rn.row(current) - rni).dot(rni);
    int best = current;
    double best_score = stay;
    for (int t = 0; t < cv.k(); ++t) {
        if (t == current) continue;
        const double score = cv.Rp.row(t).dot(rpi) - cv.Rn.row(t).dot(rni);
        if (score > best_score) {
            best_score = score;
            best = t;
        }
    }
    return best;
}

/// Greedy assignment target for a vertex not yet in any cluster: plain argmax
/// of Rp_t.rp_i - Rn_t.rn_i over all clusters, ties to the lowest label.
inline int best_assignment(const SpectralContext& ctx, const ClusterVectors& cv, int i) {
    const auto rpi = ctx.rp.row(i);
    const auto rni = ctx.rn.row(i);
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < cv.k(); ++t) {
        const double score = cv.Rp.row(t).dot(rpi) - cv.Rn.row(t).dot(rni);
        if (score > best_score) {
            best_score = score;
            best = t;
        }
    }
    return best;
}

/// Threshold below which the dense eigensolver is always used.
inline constexpr int kDenseThreshold = 512;

/// Build the full spectral context for one gamma point: BW eigenpairs, vertex
/// vectors, and the cluster-count estimate on the 1/gamma1-scaled spectrum
/// (the scaled matrix is the classical modularity matrix B, whose spectrum
/// the estimation rule is calibrated on; at gamma1 = 0, BW has no positive
/// eigenvalue and the estimate degenerates to k = 1).
inline SpectralContext make_context(const Graph& g, const GammaPair& gamma, int p) {
    const int n = g.n;
    if (p < 1) throw DataError("make_context: p must be >= 1");
    p = std::min(p, n);
    SpectralContext ctx;
    ctx.n = n;
    ctx.p = p;
    ctx.gamma = gamma;
    ctx.two_m = g.total_weight_2m;

    std::vector<double> full_spectrum;
    if (n <= kDenseThreshold || p > n / 4) {
        auto [evals, evecs] = eigen_all_abs(build_bw(g, gamma));
        full_spectrum.assign(evals.data(), evals.data() + n);
        ctx.eigenvalues = evals.head(p);
        ctx.eigenvectors = evecs.leftCols(p);
    } else {
        const BwOperator op{&g, gamma};
        const double tol = 1e-10 * std::max(1.0, g.total_weight_2m);
        try {
            auto [evals, evecs] = lanczos_top_abs(op, n, p, tol);
            ctx.eigenvalues = evals;
            ctx.eigenvectors = evecs;
            // Dedicated largest-algebraic pass for the cluster-count estimate:
            // only eigenvalues >= sqrt(chi) matter, and those are reliably
            // captured within the top-|lambda| Ritz window when it is widened.
            const int window = std::min(n, std::max(4 * p, 64));
            auto [all_evals, all_evecs] = lanczos_top_abs(op, n, window, tol);
            full_spectrum.assign(all_evals.data(), all_evals.data() + window);
        } catch (const NumericalError&) {
            // Fall back to the dense path on non-convergence.
            auto [evals, evecs] = eigen_all_abs(build_bw(g, gamma));
            full_spectrum.assign(evals.data(), evals.data() + n);
            ctx.eigenvalues = evals.head(p);
            ctx.eigenvectors = evecs.leftCols(p);
        }
    }

    // Scale to the classical modularity matrix B = BW/gamma1 for the
    // cluster-count rule; for gamma1 = 0 the raw (all non-positive) spectrum
    // already yields the degenerate estimate.
    const double scale = gamma.gamma1 > 0.0 ? 1.0 / gamma.gamma1 : 1.0;
    std::vector<double> scaled(full_spectrum.size());
    double chi = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < full_spectrum.size(); ++j) {
        scaled[j] = full_spectrum[j] * scale;
        chi = std::max(chi, scaled[j]);
    }
    ctx.chi = chi;
    ctx.k_estimate = estimate_k(scaled, chi);

    // Vertex vectors, Eqs. 8-9 style split by eigenvalue sign.
    ctx.rp = Eigen::MatrixXd::Zero(n, p);
    ctx.rn = Eigen::MatrixXd::Zero(n, p);
    for (int j = 0; j < p; ++j) {
        const double l = ctx.eigenvalues(j);
        if (l >= 0.0)
            ctx.rp.col(j) = std::sqrt(l) * ctx.eigenvectors.col(j);
        else
            ctx.rn.col(j) = std::sqrt(-l) * ctx.eigenvectors.col(j);
    }
    return ctx;
}

}  // namespace mospecg
