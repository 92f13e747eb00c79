#ifndef CAUSAL_PERM_HARNESS_EXPERIMENT_HPP
#define CAUSAL_PERM_HARNESS_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "../benchgen.hpp"
#include "../minimal_imap.hpp"
#include "../rfd.hpp"

namespace causal_perm::harness {

namespace detail {
using causal_perm::detail::DensityExpr;
using causal_perm::detail::require;
}  // namespace detail

enum class Mode { noiseless, noisy };
enum class Family { erdos_renyi, dense_bk };

/// "rfd-w<d>", "md", "mf", "mr" or "rp".
struct Algorithm {
    std::string name;
    int depth = 0;  // > 0 for rfd
    Baseline baseline = Baseline::random;

    static Algorithm parse(const std::string& name) {
        if (name == "md") return {name, 0, Baseline::min_degree};
        if (name == "mf") return {name, 0, Baseline::min_fill};
        if (name == "mr") return {name, 0, Baseline::max_remove};
        if (name == "rp") return {name, 0, Baseline::random};
        if (name.rfind("rfd-w", 0) == 0 && name.size() > 5) {
            const auto digits = name.substr(5);
            if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() <= 2) {
                const int d = std::stoi(digits);
                if (d >= 1) return {name, d, Baseline::random};
            }
        }
        throw InvalidArgument("unknown algorithm '" + name + "'");
    }

    bool is_rfd() const { return depth > 0; }
};

/// Runs one ordering algorithm against any moral oracle.
template <MoralOracle O>
OrderingResult run_ordering(const O& oracle, const Algorithm& alg, std::uint64_t seed,
                            std::optional<std::size_t> max_branch = std::nullopt,
                            std::optional<Clock::time_point> deadline = std::nullopt) {
    if (alg.is_rfd()) return rfd(oracle, RfdOptions{alg.depth, max_branch, deadline});
    return baseline_perm(oracle, alg.baseline, seed, deadline);
}

struct ExperimentSpec {
    std::string name = "experiment";
    Mode mode = Mode::noiseless;
    Family family = Family::erdos_renyi;
    std::vector<std::string> algorithms{"rfd-w1"};
    std::vector<int> p_list{10};
    std::vector<std::string> rho_list{"0.5"};
    std::vector<int> k_list{};
    /// Sample size as an expression in p, e.g. "20*p".
    std::string n_rule = "20*p";
    std::vector<double> alpha_list{0.001};
    int replicates = 100;
    std::uint64_t seed = 0;
    /// Noiseless oracle: "exact" (Gaussian precision) or "dsep".
    std::string oracle = "exact";
    bool random_noise = false;
    std::optional<std::size_t> max_branch;
    std::optional<double> timeout_s;
    /// Accepted for schema completeness; unused.
    std::optional<double> lambda;

    void validate() const {
        detail::require(replicates >= 1, "spec: replicates must be >= 1");
        detail::require(!algorithms.empty(), "spec: no algorithms");
        for (const auto& a : algorithms) Algorithm::parse(a);
        if (family == Family::erdos_renyi) {
            detail::require(!p_list.empty() && !rho_list.empty(), "spec: p_list and rho_list required");
            for (int p : p_list) {
                detail::require(p >= 1, "spec: p must be >= 1");
                for (const auto& r : rho_list) parse_density(r, p);
            }
        } else {
            detail::require(!k_list.empty(), "spec: k_list required for the bk family");
            for (int k : k_list) detail::require(k >= 2, "spec: K must be >= 2");
        }
        detail::require(oracle == "exact" || oracle == "dsep", "spec: oracle must be exact or dsep");
        if (mode == Mode::noisy) {
            detail::require(!alpha_list.empty(), "spec: alpha_list required in noisy mode");
            for (double a : alpha_list) detail::require(a > 0.0 && a < 1.0, "spec: alpha must be in (0,1)");
        }
    }

    long sample_size(int p) const {
        const double n = detail::DensityExpr(n_rule, p).evaluate();
        detail::require(std::isfinite(n) && n >= 1.0, "spec: n_rule must give a positive count");
        return std::lround(n);
    }

    static ExperimentSpec from_json(const nlohmann::json& j) {
        ExperimentSpec s;
        auto get = [&j](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("name", s.name);
        if (j.contains("mode")) {
            const auto m = j.at("mode").get<std::string>();
            detail::require(m == "noiseless" || m == "noisy", "spec: mode must be noiseless or noisy");
            s.mode = m == "noisy" ? Mode::noisy : Mode::noiseless;
        }
        if (j.contains("family")) {
            const auto f = j.at("family").get<std::string>();
            detail::require(f == "erdos_renyi" || f == "bk", "spec: family must be erdos_renyi or bk");
            s.family = f == "bk" ? Family::dense_bk : Family::erdos_renyi;
        }
        get("algorithms", s.algorithms);
        get("p_list", s.p_list);
        if (j.contains("rho_list")) {
            s.rho_list.clear();
            for (const auto& r : j.at("rho_list"))
                s.rho_list.push_back(r.is_string() ? r.get<std::string>() : nlohmann::json(r).dump());
        }
        get("k_list", s.k_list);
        if (j.contains("n_rule")) {
            const auto& n = j.at("n_rule");
            s.n_rule = n.is_string() ? n.get<std::string>() : n.dump();
        }
        get("alpha_list", s.alpha_list);
        get("replicates", s.replicates);
        get("seed", s.seed);
        get("oracle", s.oracle);
        get("random_noise", s.random_noise);
        if (j.contains("max_branch") && !j.at("max_branch").is_null())
            s.max_branch = j.at("max_branch").get<std::size_t>();
        if (j.contains("timeout_s") && !j.at("timeout_s").is_null()) s.timeout_s = j.at("timeout_s").get<double>();
        if (j.contains("lambda") && !j.at("lambda").is_null()) s.lambda = j.at("lambda").get<double>();
        s.validate();
        return s;
    }
};

/// One (algorithm, replicate, coordinate) outcome.
struct ResultRow {
    std::string experiment;
    std::string mode;
    std::string family;
    std::string algorithm;
    int p = 0;
    std::string rho_expr;
    double rho = 0.0;
    int k = 0;
    long n = 0;
    double alpha = 0.0;
    int replicate = 0;
    std::uint64_t seed = 0;
    Metrics metrics;
    std::size_t steps = 0;
    WorkCounters work;
    /// "ok", "error" or "censored" (timeout).
    std::string status = "ok";
    std::string error;
};

using ResultTable = std::vector<ResultRow>;

namespace detail {

struct Coordinate {
    int p = 0;
    std::string rho_expr;
    double rho = 0.0;
    int k = 0;
};

inline std::vector<Coordinate> coordinates(const ExperimentSpec& spec) {
    std::vector<Coordinate> out;
    if (spec.family == Family::dense_bk) {
        for (int k : spec.k_list) {
            const int p = k + static_cast<int>(choose2(k));
            const double possible = static_cast<double>(choose2(p));
            out.push_back({p, "bk", static_cast<double>(dense_bk(k).num_arcs()) / possible, k});
        }
    } else {
        for (int p : spec.p_list)
            for (const auto& r : spec.rho_list) out.push_back({p, r, parse_density(r, p), 0});
    }
    return out;
}

inline GaussianSem make_instance(const ExperimentSpec& spec, const Coordinate& c, std::uint64_t seed) {
    if (spec.family == Family::dense_bk) return with_random_weights(dense_bk(c.k), seed);
    GenConfig cfg;
    cfg.p = c.p;
    cfg.rho = c.rho;
    cfg.seed = seed;
    cfg.random_noise = spec.random_noise;
    return erdos_renyi_dag(cfg);
}

inline ResultRow base_row(const ExperimentSpec& spec, const Coordinate& c, int replicate, std::uint64_t seed,
                          const std::string& algorithm) {
    ResultRow row;
    row.experiment = spec.name;
    row.mode = spec.mode == Mode::noisy ? "noisy" : "noiseless";
    row.family = spec.family == Family::dense_bk ? "bk" : "erdos_renyi";
    row.algorithm = algorithm;
    row.p = c.p;
    row.rho_expr = c.rho_expr;
    row.rho = c.rho;
    row.k = c.k;
    row.replicate = replicate;
    row.seed = seed;
    return row;
}

// Runs the algorithm, builds the minimal IMAP with `ci`, fills in metrics.
// Any failure is recorded on the row instead of propagating.
template <MoralOracle O, CiOracle Ci>
void fill_row(ResultRow& row, const ExperimentSpec& spec, const O& oracle, const Algorithm& alg,
              std::uint64_t alg_seed, const Ci& ci, const Dag& truth) {
    std::optional<Clock::time_point> deadline;
    if (spec.timeout_s)
        deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(*spec.timeout_s));
    try {
        const OrderingResult res = run_ordering(oracle, alg, alg_seed, spec.max_branch, deadline);
        const Dag estimate = minimal_imap(ci, res.permutation);
        row.metrics = evaluate(truth, estimate);
        row.metrics.wall_time = res.wall_time;
        row.steps = res.steps.size();
        row.work = res.work;
    } catch (const Timeout& e) {
        row.status = "censored";
        row.error = e.what();
    } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
    }
}

// Evaluates tasks 0..count-1 on `jobs` threads; results keep task order.
template <class Task>
ResultTable run_tasks(std::size_t count, int jobs, Task task) {
    std::vector<ResultTable> parts(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) parts[i] = task(i);
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    ResultTable out;
    for (auto& part : parts)
        for (auto& row : part) out.push_back(std::move(row));
    return out;
}

}  // namespace detail

struct RunOptions {
    int jobs = 1;
};

/// Ground-truth oracle mode: orderings from the exact precision (or
/// d-separation), minimal IMAPs from d-separation in the true DAG.
inline ResultTable run_noiseless(const ExperimentSpec& spec, const RunOptions& opts = {}) {
    spec.validate();
    detail::require(spec.mode == Mode::noiseless, "run_noiseless: spec mode is not noiseless");
    const auto coords = detail::coordinates(spec);
    std::vector<Algorithm> algs;
    for (const auto& a : spec.algorithms) algs.push_back(Algorithm::parse(a));
    const std::size_t reps = static_cast<std::size_t>(spec.replicates);

    return detail::run_tasks(coords.size() * reps, opts.jobs, [&](std::size_t task) {
        const auto& c = coords[task / reps];
        const int rep = static_cast<int>(task % reps);
        const std::uint64_t seed = derive_seed(derive_seed(spec.seed, task / reps), rep);
        ResultTable rows;
        const GaussianSem sem = detail::make_instance(spec, c, seed);
        const DsepCi ci(sem.dag());
        for (std::size_t a = 0; a < algs.size(); ++a) {
            ResultRow row = detail::base_row(spec, c, rep, seed, algs[a].name);
            const std::uint64_t alg_seed = derive_seed(seed, 1000 + a);
            if (spec.oracle == "dsep") {
                detail::fill_row(row, spec, DsepMoralOracle(sem.dag()), algs[a], alg_seed, ci, sem.dag());
            } else {
                detail::fill_row(row, spec, GaussianMoralOracle::exact(sem), algs[a], alg_seed, ci, sem.dag());
            }
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

/// Sample mode: data drawn from the SEM, Fisher-z oracle at each alpha,
/// minimal IMAPs from sample partial-correlation tests at the same alpha.
inline ResultTable run_noisy(const ExperimentSpec& spec, const RunOptions& opts = {}) {
    spec.validate();
    detail::require(spec.mode == Mode::noisy, "run_noisy: spec mode is not noisy");
    const auto coords = detail::coordinates(spec);
    std::vector<Algorithm> algs;
    for (const auto& a : spec.algorithms) algs.push_back(Algorithm::parse(a));
    const std::size_t reps = static_cast<std::size_t>(spec.replicates);

    return detail::run_tasks(coords.size() * reps, opts.jobs, [&](std::size_t task) {
        const auto& c = coords[task / reps];
        const int rep = static_cast<int>(task % reps);
        const std::uint64_t seed = derive_seed(derive_seed(spec.seed, task / reps), rep);
        const long n = spec.sample_size(c.p);
        ResultTable rows;
        const GaussianSem sem = detail::make_instance(spec, c, seed);
        const Eigen::MatrixXd data = sample_data(sem, n, derive_seed(seed, 7));
        const Eigen::MatrixXd cov = sample_covariance(data);
        for (double alpha : spec.alpha_list) {
            CiTestConfig cfg;
            cfg.alpha = alpha;
            cfg.mode = CiMode::fisher_z;
            std::optional<GaussianMoralOracle> oracle;
            std::string setup_error;
            try {
                oracle = GaussianMoralOracle::from_data(data, cfg);
            } catch (const std::exception& e) {
                setup_error = e.what();
            }
            const GaussianCi ci(cov, cfg, n);
            for (std::size_t a = 0; a < algs.size(); ++a) {
                ResultRow row = detail::base_row(spec, c, rep, seed, algs[a].name);
                row.n = n;
                row.alpha = alpha;
                if (oracle) {
                    detail::fill_row(row, spec, *oracle, algs[a], derive_seed(seed, 1000 + a), ci, sem.dag());
                } else {
                    row.status = "error";
                    row.error = setup_error;
                }
                rows.push_back(std::move(row));
            }
        }
        return rows;
    });
}

inline ResultTable run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {}) {
    return spec.mode == Mode::noisy ? run_noisy(spec, opts) : run_noiseless(spec, opts);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    detail::require(x.size() == y.size() && x.size() >= 2, "loglog_slope: need at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        detail::require(x[i] > 0 && y[i] > 0, "loglog_slope: values must be positive");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

struct ScalingFit {
    std::string algorithm;
    std::vector<int> p;
    std::vector<double> mean_ops;
    std::vector<double> median_time;
    double ops_slope = std::numeric_limits<double>::quiet_NaN();
    double time_slope = std::numeric_limits<double>::quiet_NaN();
};

struct ScalingReport {
    ResultTable rows;
    std::vector<ScalingFit> fits;
};

/// Runs the spec over its p_list and fits log-log growth of the
/// instrumented operation counts and of median wall time per algorithm.
inline ScalingReport run_scaling(const ExperimentSpec& spec, const RunOptions& opts = {}) {
    ScalingReport report;
    report.rows = run_experiment(spec, opts);
    for (const auto& name : spec.algorithms) {
        ScalingFit fit;
        fit.algorithm = name;
        std::map<int, std::vector<const ResultRow*>> by_p;
        for (const auto& r : report.rows)
            if (r.algorithm == name && r.status == "ok") by_p[r.p].push_back(&r);
        std::vector<double> xs;
        for (auto& [p, rows] : by_p) {
            double ops = 0;
            std::vector<double> times;
            for (const auto* r : rows) {
                ops += static_cast<double>(r->work.entry_ops);
                times.push_back(r->metrics.wall_time);
            }
            std::sort(times.begin(), times.end());
            const std::size_t mid = times.size() / 2;
            const double median = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
            fit.p.push_back(p);
            fit.mean_ops.push_back(ops / static_cast<double>(rows.size()));
            fit.median_time.push_back(median);
            xs.push_back(p);
        }
        if (xs.size() >= 2) {
            if (std::all_of(fit.mean_ops.begin(), fit.mean_ops.end(), [](double o) { return o > 0; }))
                fit.ops_slope = loglog_slope(xs, fit.mean_ops);
            if (std::all_of(fit.median_time.begin(), fit.median_time.end(), [](double t) { return t > 0; }))
                fit.time_slope = loglog_slope(xs, fit.median_time);
        }
        report.fits.push_back(std::move(fit));
    }
    return report;
}

}  // namespace causal_perm::harness

#endif
