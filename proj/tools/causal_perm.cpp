// Command-line front end: instance generation, sampling, orderings,
// minimal IMAPs, benchmark runs and plots.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <causal_perm/causal_perm.hpp>
#include <causal_perm/harness/experiment.hpp>
#include <causal_perm/harness/plot.hpp>
#include <causal_perm/harness/table.hpp>

namespace fs = std::filesystem;
using namespace causal_perm;

namespace {

constexpr int kUsage = 1;
constexpr int kFailure = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return in;
}

// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

Baseline baseline_of(const std::string& name) {
    const auto alg = harness::Algorithm::parse(name);
    return alg.baseline;
}

struct Common {
    std::uint64_t seed = 0;
    int jobs = 1;
    int depth = 1;
    double alpha = 0.001;
    std::string oracle = "exact";
    std::string out;
    bool header = false;
    std::optional<std::size_t> max_branch;
};

struct GenArgs {
    int p = 10;
    std::string rho = "0.5";
    std::optional<int> bk;
    bool random_noise = false;
};

std::string cmd_gen(const Common& c, const GenArgs& g) {
    Dag dag;
    if (g.bk) {
        dag = with_random_weights(dense_bk(*g.bk), c.seed).dag();
    } else {
        GenConfig cfg;
        cfg.p = g.p;
        cfg.rho = parse_density(g.rho, g.p);
        cfg.seed = c.seed;
        cfg.random_noise = g.random_noise;
        dag = erdos_renyi_dag(cfg).dag();
    }
    std::ostringstream out;
    io::write_dag(out, dag);
    return out.str();
}

std::string cmd_sample(const Common& c, const std::string& dag_path, long n) {
    auto in = open_in(dag_path);
    const Dag dag = io::read_dag(in);
    if (!dag.weighted()) throw std::runtime_error("sample: DAG file has no edge weights");
    std::ostringstream out;
    io::write_data_csv(out, sample_data(GaussianSem(dag), n, c.seed));
    return out.str();
}

struct OrderArgs {
    std::string dag;
    std::string data;
    std::string algorithm = "rfd";
    std::string steps;
};

template <MoralOracle O>
OrderingResult run_order(const O& oracle, const Common& c, const OrderArgs& a) {
    if (a.algorithm == "rfd") return rfd(oracle, RfdOptions{c.depth, c.max_branch, std::nullopt});
    return baseline_perm(oracle, baseline_of(a.algorithm), c.seed);
}

std::string steps_csv(const OrderingResult& res) {
    std::ostringstream out;
    out << harness::kSchemaLine << '\n'
        << "step,vertex,removal,fill,degree,via_removal,score_evals,marginalizations,entry_ops\n";
    for (std::size_t s = 0; s < res.steps.size(); ++s) {
        const auto& step = res.steps[s];
        for (const auto& n : step.chosen)
            out << s + 1 << ',' << n.vertex + 1 << ',' << n.removal << ',' << n.fill << ',' << n.degree << ','
                << (n.via_removal ? 1 : 0) << ',' << step.work.score_evals << ',' << step.work.marginalizations
                << ',' << step.work.entry_ops << '\n';
    }
    return out.str();
}

std::string cmd_order(const Common& c, const OrderArgs& a) {
    if (a.algorithm != "rfd" && a.algorithm != "md" && a.algorithm != "mf" && a.algorithm != "mr" &&
        a.algorithm != "rp")
        throw UsageError("order: --algorithm must be rfd, md, mf, mr or rp");
    OrderingResult res;
    if (c.oracle == "sample") {
        if (a.data.empty()) throw UsageError("order: --oracle sample needs --data");
        auto in = open_in(a.data);
        CiTestConfig cfg;
        cfg.alpha = c.alpha;
        res = run_order(GaussianMoralOracle::from_data(io::read_data_csv(in, c.header), cfg), c, a);
    } else {
        if (a.dag.empty()) throw UsageError("order: --oracle " + c.oracle + " needs --dag");
        auto in = open_in(a.dag);
        const Dag dag = io::read_dag(in);
        if (c.oracle == "dsep") {
            res = run_order(DsepMoralOracle(dag), c, a);
        } else {
            if (!dag.weighted()) throw std::runtime_error("order: exact oracle needs a weighted DAG");
            res = run_order(GaussianMoralOracle::exact(GaussianSem(dag)), c, a);
        }
    }
    if (!a.steps.empty()) emit(a.steps, steps_csv(res));
    std::ostringstream out;
    io::write_permutation(out, res.permutation);
    return out.str();
}

struct ImapArgs {
    std::string perm;
    std::string dag;
    std::string data;
    std::string metrics;
};

std::string cmd_imap(const Common& c, const ImapArgs& a) {
    std::optional<Dag> truth;
    if (!a.dag.empty()) {
        auto in = open_in(a.dag);
        truth = io::read_dag(in);
    }
    Dag estimate;
    if (c.oracle == "sample") {
        if (a.data.empty()) throw UsageError("imap: --oracle sample needs --data");
        auto in = open_in(a.data);
        const Eigen::MatrixXd data = io::read_data_csv(in, c.header);
        auto pin = open_in(a.perm);
        const Permutation perm = io::read_permutation(pin, static_cast<int>(data.cols()));
        CiTestConfig cfg;
        cfg.alpha = c.alpha;
        cfg.mode = CiMode::fisher_z;
        if (data.rows() <= data.cols() + 3) throw InsufficientSamples("imap: sample oracle needs n > p + 3");
        estimate = minimal_imap(GaussianCi(sample_covariance(data), cfg, data.rows()), perm);
    } else {
        if (!truth) throw UsageError("imap: --oracle " + c.oracle + " needs --dag");
        auto pin = open_in(a.perm);
        const Permutation perm = io::read_permutation(pin, truth->size());
        if (c.oracle == "dsep" || !truth->weighted()) {
            estimate = minimal_imap(DsepCi(*truth), perm);
        } else {
            estimate = minimal_imap(GaussianCi(sem_covariance(GaussianSem(*truth)), CiTestConfig{}), perm);
        }
    }
    if (!a.metrics.empty()) {
        if (!truth) throw UsageError("imap: --metrics needs --dag");
        const Metrics m = evaluate(*truth, estimate);
        std::ostringstream out;
        out << harness::kSchemaLine << '\n'
            << "true_edges,est_edges,edge_ratio,exact_recovery,tpr,fpr,shd\n"
            << m.true_edges << ',' << m.estimated_edges << ',' << harness::detail::fmt_double(m.edge_ratio) << ','
            << (m.exact_recovery ? 1 : 0) << ',' << harness::detail::fmt_double(m.tpr) << ','
            << harness::detail::fmt_double(m.fpr) << ',' << m.shd << '\n';
        emit(a.metrics, out.str());
    }
    std::ostringstream out;
    io::write_dag(out, estimate);
    return out.str();
}

struct BenchArgs {
    std::string spec;
    bool scaling = false;
    bool seed_given = false;
};

void cmd_bench(const Common& c, const BenchArgs& b) {
    auto in = open_in(b.spec);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bench: invalid spec file: ") + e.what());
    }
    harness::ExperimentSpec spec;
    try {
        spec = harness::ExperimentSpec::from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bench: invalid spec file: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    if (b.seed_given) spec.seed = c.seed;
    const fs::path dir = c.out.empty() ? fs::path("results") / spec.name : fs::path(c.out);
    const harness::RunOptions opts{c.jobs};

    harness::ResultTable rows;
    std::vector<harness::ScalingFit> fits;
    if (b.scaling) {
        auto report = harness::run_scaling(spec, opts);
        rows = std::move(report.rows);
        fits = std::move(report.fits);
    } else {
        rows = harness::run_experiment(spec, opts);
    }
    std::ostringstream results, timing, summary;
    harness::write_results(results, rows);
    harness::write_timing(timing, rows);
    harness::write_summary(summary, harness::aggregate(rows));
    fs::create_directories(dir);
    emit((dir / "results.csv").string(), results.str());
    emit((dir / "timing.csv").string(), timing.str());
    emit((dir / "summary.csv").string(), summary.str());
    if (b.scaling) {
        std::ostringstream scaling;
        harness::write_scaling(scaling, fits);
        emit((dir / "scaling.csv").string(), scaling.str());
    }
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.status != "ok";
    std::cerr << rows.size() << " rows (" << failed << " not ok) written to " << dir.string() << '\n';
}

struct PlotArgs {
    std::string results;
    std::string timing;
    std::string kind = "all";
};

void cmd_plot(const Common& c, const PlotArgs& a) {
    auto in = open_in(a.results);
    harness::ResultTable rows = harness::read_results(in);
    std::string timing = a.timing;
    if (timing.empty()) {
        const fs::path guess = fs::path(a.results).parent_path() / "timing.csv";
        if (fs::exists(guess)) timing = guess.string();
    }
    if (!timing.empty()) {
        auto tin = open_in(timing);
        harness::merge_timing(rows, tin);
    }
    std::vector<harness::PlotKind> kinds;
    if (a.kind == "all") {
        kinds = {harness::PlotKind::ratio_vs_p, harness::PlotKind::tpr_vs_p, harness::PlotKind::fpr_vs_p};
        if (!timing.empty()) kinds.push_back(harness::PlotKind::time_vs_tpr);
    } else {
        try {
            kinds = {harness::parse_plot_kind(a.kind)};
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
    }
    const fs::path dir = c.out.empty() ? fs::path(a.results).parent_path() / "plots" : fs::path(c.out);
    for (auto kind : kinds) std::cerr << harness::emit_plots(rows, kind, dir).string() << '\n';
}

void add_common(CLI::App* sub, Common& c, bool with_search) {
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--out", c.out, "Output file or directory");
    if (with_search) {
        sub->add_option("--depth", c.depth, "RFD search depth w")->check(CLI::Range(1, 16));
        sub->add_option("--alpha", c.alpha, "Significance level for sample-mode tests")
            ->check(CLI::Range(0.0, 1.0));
        sub->add_option("--oracle", c.oracle, "Moral-graph oracle")
            ->check(CLI::IsMember({"exact", "dsep", "sample"}));
        sub->add_flag("--header", c.header, "Data CSV has a header line");
        sub->add_option("--max-branch", c.max_branch, "Cap on BFS paths per level");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse-IMAP permutation search for causal DAGs"};
    app.require_subcommand(1);
    Common c;

    GenArgs g;
    auto* gen = app.add_subcommand("gen", "Generate a random weighted DAG");
    add_common(gen, c, false);
    gen->add_option("--p", g.p, "Number of vertices")->check(CLI::PositiveNumber);
    gen->add_option("--rho", g.rho, "Edge density, literal or expression in p (e.g. 3/p)");
    gen->add_option("--bk", g.bk, "Dense B_K family instead of Erdos-Renyi")->check(CLI::Range(2, 64));
    gen->add_flag("--random-noise", g.random_noise, "Noise variances uniform in [0.5, 1.5]");

    std::string sample_dag;
    long sample_n = 0;
    auto* sample = app.add_subcommand("sample", "Draw Gaussian samples from a weighted DAG");
    add_common(sample, c, false);
    sample->add_option("--dag", sample_dag, "DAG file")->required();
    sample->add_option("-n,--n", sample_n, "Number of samples")->required()->check(CLI::PositiveNumber);

    OrderArgs o;
    auto* order = app.add_subcommand("order", "Compute a vertex ordering");
    add_common(order, c, true);
    order->add_option("--dag", o.dag, "True DAG (exact or dsep oracle)");
    order->add_option("--data", o.data, "Data CSV (sample oracle)");
    order->add_option("--algorithm", o.algorithm, "rfd, md, mf, mr or rp");
    order->add_option("--steps", o.steps, "Write the per-step log CSV here");

    ImapArgs im;
    auto* imap = app.add_subcommand("imap", "Minimal IMAP induced by a permutation");
    add_common(imap, c, true);
    imap->add_option("--perm", im.perm, "Permutation file")->required();
    imap->add_option("--dag", im.dag, "True DAG (CI oracle and metrics)");
    imap->add_option("--data", im.data, "Data CSV (sample oracle)");
    imap->add_option("--metrics", im.metrics, "Write metrics against --dag here");

    BenchArgs b;
    auto* bench = app.add_subcommand("bench", "Run an experiment spec (JSON)");
    add_common(bench, c, false);
    bench->add_option("spec", b.spec, "Experiment spec file")->required();
    bench->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    bench->add_flag("--scaling", b.scaling, "Also fit log-log growth of operation counts");

    PlotArgs pl;
    auto* plot = app.add_subcommand("plot", "Render plots from a results CSV");
    add_common(plot, c, false);
    plot->add_option("results", pl.results, "results.csv")->required();
    plot->add_option("--timing", pl.timing, "timing.csv (default: next to results)");
    plot->add_option("--kind", pl.kind, "ratio-vs-p, time-vs-tpr, tpr-vs-p, fpr-vs-p or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*gen) emit(c.out, cmd_gen(c, g));
        if (*sample) emit(c.out, cmd_sample(c, sample_dag, sample_n));
        if (*order) emit(c.out, cmd_order(c, o));
        if (*imap) emit(c.out, cmd_imap(c, im));
        if (*bench) {
            b.seed_given = bench->count("--seed") > 0;
            cmd_bench(c, b);
        }
        if (*plot) cmd_plot(c, pl);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return 0;
}
