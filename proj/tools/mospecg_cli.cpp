// Command-line front end: gamma-sweep clustering runs, consensus ensemble
// runs, and partition evaluation, emitting CSV and membership artifacts.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "mospecg/ensemble.hpp"
#include "mospecg/graph.hpp"
#include "mospecg/metrics.hpp"
#include "mospecg/mospecg.hpp"

namespace fs = std::filesystem;
using namespace mospecg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
    std::string graph_path;
    std::string truth_path;
    std::string index_base = "auto";
    int nf = 11;
    int ng = 50;
    int np = 5;
    int no_pct = 40;
    double p_frac = 0.1;
    int p_abs = 0;
    int it = 1;
    double tau = 0.5;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
};

IndexBase parse_base(const std::string& s) {
    if (s == "auto") return IndexBase::Auto;
    if (s == "zero") return IndexBase::Zero;
    if (s == "one") return IndexBase::One;
    throw CLI::ValidationError("--index-base must be auto|zero|one");
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_graph) {
    auto* g = cmd->add_option("--graph", o.graph_path, "edge-list file");
    if (needs_graph) g->required();
    cmd->add_option("--truth", o.truth_path, "ground-truth membership file (enables NMI)");
    cmd->add_option("--index-base", o.index_base, "vertex id base: auto|zero|one")
        ->default_val("auto");
    cmd->add_option("--nf", o.nf, "number of gamma grid points")->default_val(11);
    cmd->add_option("--ng", o.ng, "generations per memetic run")->default_val(50);
    cmd->add_option("--np", o.np, "population size")->default_val(5);
    cmd->add_option("--no", o.no_pct, "offspring replacement percentage")->default_val(40);
    cmd->add_option("--p-frac", o.p_frac, "retained eigenpairs as a fraction of n")
        ->default_val(0.1);
    cmd->add_option("--p", o.p_abs, "retained eigenpairs, absolute (overrides --p-frac)");
    cmd->add_option("--it", o.it, "local-search sweeps per generation")->default_val(1);
    cmd->add_option("--tau", o.tau, "consensus threshold")->default_val(0.5);
    cmd->add_option("--seed", o.seed, "RNG seed (falls back to env MOSPECG_SEED)")
        ->each([&o](const std::string&) { o.seed_set = true; });
    cmd->add_option("--workers", o.workers, "parallel sweep workers (0 = all cores)")
        ->default_val(0);
}

std::uint64_t resolve_seed(const CommonOpts& o) {
    if (o.seed_set) return o.seed;
    if (const char* env = std::getenv("MOSPECG_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

MemeticParams memetic_of(const CommonOpts& o) {
    MemeticParams mp;
    mp.n_generations = o.ng;
    mp.pop_size = o.np;
    mp.offspring_pct = o.no_pct;
    mp.local_search_iters = o.it;
    return mp;
}

PSpec pspec_of(const CommonOpts& o) { return PSpec{o.p_frac, o.p_abs}; }

std::string gamma_tag(double g1) {
    std::ostringstream ss;
    ss.precision(4);
    ss << g1;
    std::string s = ss.str();
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

SolutionSet sweep(const CommonOpts& o, const Graph& g, const Partition* truth) {
    return run_mospecg(g, o.nf, memetic_of(o), pspec_of(o), resolve_seed(o), truth,
                       resolve_workers(o.workers));
}

int cmd_run(const CommonOpts& o, const std::string& out_dir) {
    const Graph g = load_edge_list(o.graph_path, parse_base(o.index_base));
    std::optional<Partition> truth;
    if (!o.truth_path.empty()) truth = load_membership(o.truth_path, g.n);
    const SolutionSet set = sweep(o, g, truth ? &*truth : nullptr);

    fs::create_directories(out_dir);
    write_solutions_csv(set, (fs::path(out_dir) / "solutions.csv").string());
    for (const SolutionEntry& e : set.entries) {
        if (e.failed) {
            std::cerr << "warning: entry gamma1=" << e.gamma.gamma1 << " failed: " << e.error
                      << "\n";
            continue;
        }
        save_membership(e.partition,
                        (fs::path(out_dir) / ("gamma_" + gamma_tag(e.gamma.gamma1) +
                                              ".membership"))
                            .string());
    }
    std::cout << "wrote " << set.entries.size() << " entries to " << out_dir << "\n";
    for (const SolutionEntry& e : set.entries) {
        if (e.failed) continue;
        std::cout << "gamma1=" << e.gamma.gamma1 << " k=" << e.k_found << " q=" << e.q;
        if (e.nmi_value) std::cout << " nmi=" << *e.nmi_value;
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_ensemble(const CommonOpts& o, const std::string& out_dir,
                 const std::string& solutions_dir, bool emit_consensus) {
    const Graph g = load_edge_list(o.graph_path, parse_base(o.index_base));
    std::optional<Partition> truth;
    if (!o.truth_path.empty()) truth = load_membership(o.truth_path, g.n);

    SolutionSet set;
    if (!solutions_dir.empty()) {
        // Reuse per-gamma membership files from a prior sweep.
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(solutions_dir))
            if (entry.path().extension() == ".membership" &&
                entry.path().filename().string().rfind("gamma_", 0) == 0)
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.size() < 3)
            throw DataError("need at least 3 membership files in " + solutions_dir);
        set.nf = static_cast<int>(files.size());
        for (const fs::path& f : files) {
            SolutionEntry e;
            e.partition = load_membership(f.string(), g.n, IndexBase::Zero);
            set.entries.push_back(std::move(e));
        }
    } else {
        set = sweep(o, g, truth ? &*truth : nullptr);
    }

    const std::uint64_t seed = resolve_seed(o);
    const Partition ep = run_specg_ec(g, set, o.tau, memetic_of(o), pspec_of(o), seed);

    fs::create_directories(out_dir);
    save_membership(ep, (fs::path(out_dir) / "ensemble.membership").string());
    if (emit_consensus)
        write_consensus_csv(build_consensus(set, o.tau),
                            (fs::path(out_dir) / "consensus.csv").string());

    std::cout << "k=" << ep.k << " q=" << modularity(g, ep);
    if (truth) std::cout << " nmi=" << nmi(ep, *truth);
    std::cout << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path,
             const std::string& graph_path, const std::string& index_base) {
    std::optional<Graph> g;
    if (!graph_path.empty()) g = load_edge_list(graph_path, parse_base(index_base));

    // Without a graph we still need n; take it from the larger vertex id range.
    auto count_vertices = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open membership file: " + path);
        long long max_id = -1, min_id = std::numeric_limits<long long>::max();
        long long v, c;
        while (in >> v >> c) {
            max_id = std::max(max_id, v);
            min_id = std::min(min_id, v);
        }
        if (max_id < 0) throw DataError("empty membership file: " + path);
        return static_cast<int>(min_id == 1 ? max_id : max_id + 1);
    };
    const int n = g ? g->n : std::max(count_vertices(pred_path), count_vertices(truth_path));

    const Partition pred = load_membership(pred_path, n);
    const Partition truth = load_membership(truth_path, n);
    const PairAgreement agree = pair_agreement(pred, truth);

    std::cout << "nmi=" << nmi(pred, truth) << "\n";
    std::cout << "pairs_correct_together=" << agree.correct_together << "\n";
    std::cout << "pairs_wrong=" << agree.wrong << "\n";
    std::cout << "clusters=" << pred.k << " sizes=";
    const auto sizes = cluster_sizes(pred);
    for (std::size_t i = 0; i < sizes.size(); ++i)
        std::cout << (i ? "," : "") << sizes[i];
    std::cout << "\n";
    if (g) {
        std::cout << "q_in=" << q_in(*g, pred) << "\n";
        std::cout << "q_null=" << q_null(*g, pred) << "\n";
        std::cout << "q=" << modularity(*g, pred) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bi-objective spectral-evolutionary graph clustering toolkit"};
    app.require_subcommand(1);

    CommonOpts run_opts, ens_opts;
    std::string run_out = "out", ens_out = "out", ens_solutions;
    bool emit_consensus = false;
    std::string eval_pred, eval_truth, eval_graph, eval_base = "auto";

    CLI::App* run = app.add_subcommand("run", "gamma-sweep clustering");
    add_common(run, run_opts, true);
    run->add_option("--out", run_out, "output directory")->default_val("out");

    CLI::App* ens = app.add_subcommand("ensemble", "consensus ensemble clustering");
    add_common(ens, ens_opts, true);
    ens->add_option("--out", ens_out, "output directory")->default_val("out");
    ens->add_option("--solutions", ens_solutions, "reuse membership files from a prior sweep");
    ens->add_flag("--emit-consensus", emit_consensus, "also write consensus.csv");

    CLI::App* ev = app.add_subcommand("eval", "evaluate a partition against a reference");
    ev->add_option("--pred", eval_pred, "predicted membership file")->required();
    ev->add_option("--truth", eval_truth, "reference membership file")->required();
    ev->add_option("--graph", eval_graph, "edge list (adds modularity reporting)");
    ev->add_option("--index-base", eval_base, "vertex id base: auto|zero|one")
        ->default_val("auto");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_opts, run_out);
        if (ens->parsed()) return cmd_ensemble(ens_opts, ens_out, ens_solutions, emit_consensus);
        if (ev->parsed()) return cmd_eval(eval_pred, eval_truth, eval_graph, eval_base);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
