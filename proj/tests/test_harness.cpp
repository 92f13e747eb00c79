#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <causal_perm/harness/experiment.hpp>
#include <causal_perm/harness/plot.hpp>
#include <causal_perm/harness/table.hpp>

#include "test_support.hpp"

using namespace causal_perm;
using namespace causal_perm::harness;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec s;
    s.name = "small";
    s.algorithms = {"rfd-w1", "md", "mf", "mr", "rp"};
    s.p_list = {6, 8};
    s.rho_list = {"0.4", "2/p"};
    s.replicates = 3;
    s.seed = 21;
    return s;
}

std::string results_csv(const ResultTable& rows) {
    std::ostringstream out;
    write_results(out, rows);
    return out.str();
}

}  // namespace

TEST(Algorithm, Parse) {
    EXPECT_EQ(Algorithm::parse("rfd-w2").depth, 2);
    EXPECT_EQ(Algorithm::parse("md").baseline, Baseline::min_degree);
    EXPECT_FALSE(Algorithm::parse("rp").is_rfd());
    EXPECT_THROW(Algorithm::parse("rfd-w0"), InvalidArgument);
    EXPECT_THROW(Algorithm::parse("rfd-w"), InvalidArgument);
    EXPECT_THROW(Algorithm::parse("gsp"), InvalidArgument);
}

TEST(ExperimentSpec, FromJson) {
    const auto j = nlohmann::json::parse(R"({
        "name": "fig", "mode": "noisy", "algorithms": ["rfd-w1", "md"],
        "p_list": [10, 20], "rho_list": ["3/p", 0.5], "n_rule": "20*p",
        "alpha_list": [0.001, 0.01], "replicates": 4, "seed": 9, "max_branch": 50
    })");
    const auto s = ExperimentSpec::from_json(j);
    EXPECT_EQ(s.mode, Mode::noisy);
    EXPECT_EQ(s.rho_list, (std::vector<std::string>{"3/p", "0.5"}));
    EXPECT_EQ(s.sample_size(20), 400);
    EXPECT_EQ(*s.max_branch, 50u);
    EXPECT_FALSE(s.timeout_s.has_value());

    EXPECT_THROW(ExperimentSpec::from_json(nlohmann::json::parse(R"({"mode": "loud"})")), InvalidArgument);
    EXPECT_THROW(ExperimentSpec::from_json(nlohmann::json::parse(R"({"algorithms": ["pc"]})")), InvalidArgument);
    EXPECT_THROW(ExperimentSpec::from_json(nlohmann::json::parse(R"({"p_list": [2], "rho_list": ["3/p"]})")),
                 InvalidArgument);
    EXPECT_THROW(ExperimentSpec::from_json(nlohmann::json::parse(R"({"family": "bk"})")), InvalidArgument);
    EXPECT_THROW(ExperimentSpec::from_json(nlohmann::json::parse(R"({"replicates": "many"})")),
                 nlohmann::json::exception);
}

TEST(RunExperiment, RowsCoverEveryCombination) {
    const auto rows = run_experiment(small_spec());
    ASSERT_EQ(rows.size(), 2u * 2u * 3u * 5u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.status, "ok") << r.error;
        EXPECT_EQ(r.steps > 0, true);
    }
    EXPECT_EQ(rows.front().algorithm, "rfd-w1");
    EXPECT_EQ(rows.front().rho_expr, "0.4");
}

TEST(RunExperiment, CsvIsByteIdenticalAcrossRunsAndThreadCounts) {
    const auto spec = small_spec();
    const std::string a = results_csv(run_experiment(spec));
    const std::string b = results_csv(run_experiment(spec, RunOptions{4}));
    EXPECT_EQ(a, b);
    auto other = spec;
    other.seed = 22;
    EXPECT_NE(a, results_csv(run_experiment(other)));
}

TEST(RunExperiment, DsepAndExactOraclesAgreeInNoiselessMode) {
    auto spec = small_spec();
    spec.algorithms = {"rfd-w1", "mf"};
    const auto exact = run_experiment(spec);
    spec.oracle = "dsep";
    const auto dsep = run_experiment(spec);
    ASSERT_EQ(exact.size(), dsep.size());
    for (std::size_t i = 0; i < exact.size(); ++i)
        EXPECT_EQ(exact[i].metrics.estimated_edges, dsep[i].metrics.estimated_edges) << i;
}

TEST(RunExperiment, FailuresAreRecordedPerRow) {
    ExperimentSpec spec;
    spec.mode = Mode::noisy;
    spec.algorithms = {"rfd-w1", "md"};
    spec.p_list = {8};
    spec.rho_list = {"0.3"};
    spec.n_rule = "p+2";  // too few rows for partial correlations
    spec.replicates = 2;
    const auto rows = run_experiment(spec);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.status, "error");
        EXPECT_FALSE(r.error.empty());
    }
    const auto groups = aggregate(rows);
    EXPECT_EQ(groups.front().failures, 2u);
    EXPECT_TRUE(std::isnan(groups.front().edge_ratio.mean));
}

TEST(RunExperiment, TimeoutCensorsRows) {
    ExperimentSpec spec;
    spec.algorithms = {"rfd-w3"};
    spec.p_list = {30};
    spec.rho_list = {"0.5"};
    spec.replicates = 1;
    spec.timeout_s = 1e-9;
    const auto rows = run_experiment(spec);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].status, "censored");
}

TEST(RunExperiment, NoisyModeProducesSensibleRates) {
    ExperimentSpec spec;
    spec.mode = Mode::noisy;
    spec.algorithms = {"rfd-w1"};
    spec.p_list = {10};
    spec.rho_list = {"0.3"};
    spec.n_rule = "100*p";
    spec.alpha_list = {0.001, 0.05};
    spec.replicates = 4;
    spec.seed = 4;
    const auto rows = run_experiment(spec);
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) {
        ASSERT_EQ(r.status, "ok") << r.error;
        EXPECT_EQ(r.n, 1000);
        EXPECT_GE(r.metrics.tpr, 0.0);
        EXPECT_LE(r.metrics.tpr, 1.0);
        EXPECT_LE(r.metrics.fpr, 0.5);
    }
}

TEST(RunExperiment, DenseBkFamily) {
    ExperimentSpec spec;
    spec.family = Family::dense_bk;
    spec.k_list = {3, 4};
    spec.algorithms = {"rfd-w1"};
    spec.replicates = 2;
    const auto rows = run_experiment(spec);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.status, "ok");
        EXPECT_DOUBLE_EQ(r.metrics.edge_ratio, 1.0);
    }
    EXPECT_EQ(rows[2].p, 10);
    EXPECT_EQ(rows[2].metrics.true_edges, 27u);
}

TEST(RunExperiment, CountersReconcile) {
    auto spec = small_spec();
    spec.algorithms = {"rfd-w1", "md", "rp"};
    for (const auto& r : run_experiment(spec)) {
        if (r.algorithm == "rfd-w1") {
            EXPECT_GT(r.work.score_evals, 0u);
            // one speculative marginalization per score plus the committed ones
            EXPECT_EQ(r.work.marginalizations, r.work.score_evals + static_cast<std::uint64_t>(r.p));
        } else {
            EXPECT_EQ(r.work.score_evals, 0u);
        }
    }
}

TEST(Table, RoundTripWithTiming) {
    auto rows = run_experiment(small_spec());
    rows[3].status = "error";
    rows[3].error = "boom, with \"quotes\"";
    const std::string csv = results_csv(rows);
    std::istringstream in(csv);
    auto back = read_results(in);
    ASSERT_EQ(back.size(), rows.size());
    EXPECT_EQ(results_csv(back), csv);
    EXPECT_EQ(back[3].error, rows[3].error);

    std::ostringstream timing;
    write_timing(timing, rows);
    std::istringstream tin(timing.str());
    merge_timing(back, tin);
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_DOUBLE_EQ(back[i].metrics.wall_time, rows[i].metrics.wall_time);
}

TEST(Table, RejectsForeignCsv) {
    std::istringstream in("a,b\n1,2\n");
    EXPECT_THROW(read_results(in), TableError);
}

TEST(Table, SummaryStatistics) {
    const Stat s = summarize({1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_NEAR(s.se, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
    EXPECT_EQ(summarize({}).count, 0u);
    EXPECT_TRUE(std::isnan(summarize({7.0}).se) || summarize({7.0}).se == 0.0);
}

TEST(LogLogSlope, RecoversPowerLaw) {
    const std::vector<double> x{10, 20, 40, 80};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 4.0));
    EXPECT_NEAR(loglog_slope(x, y), 4.0, 1e-12);
    EXPECT_THROW(loglog_slope({1.0}, {1.0}), InvalidArgument);
    EXPECT_THROW(loglog_slope({1.0, 2.0}, {0.0, 1.0}), InvalidArgument);
}

TEST(Scaling, OpsSlopeForRfdIsAtMostQuartic) {
    ExperimentSpec spec;
    spec.algorithms = {"rfd-w1"};
    spec.p_list = {8, 16, 32};
    spec.rho_list = {"3/p"};
    spec.replicates = 3;
    const auto report = run_scaling(spec);
    ASSERT_EQ(report.fits.size(), 1u);
    EXPECT_GT(report.fits[0].ops_slope, 2.5);
    EXPECT_LE(report.fits[0].ops_slope, 4.3);
}

TEST(Scaling, NoSlopeWithoutScoredWork) {
    auto spec = small_spec();
    spec.algorithms = {"rp", "md"};
    spec.p_list = {6, 10};
    const auto report = run_scaling(spec);
    ASSERT_EQ(report.fits.size(), 2u);
    for (const auto& f : report.fits) EXPECT_EQ(std::isnan(f.ops_slope), f.algorithm == "rp");
}

TEST(Plot, EmptyTableIsAnError) {
    EXPECT_THROW(build_series({}, PlotKind::ratio_vs_p), TableError);
    const auto dir = std::filesystem::temp_directory_path() / "causal_perm_plot_empty";
    std::filesystem::remove_all(dir);
    EXPECT_THROW(emit_plots({}, PlotKind::ratio_vs_p, dir), TableError);
    EXPECT_FALSE(std::filesystem::exists(dir / "ratio-vs-p.svg"));
}

TEST(Plot, SinglePointHasNoPolyline) {
    auto spec = small_spec();
    spec.p_list = {6};
    spec.rho_list = {"0.4"};
    spec.algorithms = {"md"};
    const auto series = build_series(run_experiment(spec), PlotKind::ratio_vs_p);
    ASSERT_EQ(series.size(), 1u);
    ASSERT_EQ(series[0].points.size(), 1u);
    const std::string svg = render_svg(series, "p", "ratio", "t");
    EXPECT_EQ(svg.find("<polyline"), std::string::npos);
    EXPECT_NE(svg.find("<circle"), std::string::npos);
}

TEST(Plot, OutputIsDeterministic) {
    const auto rows = run_experiment(small_spec());
    const auto dir = std::filesystem::temp_directory_path() / "causal_perm_plot_det";
    std::filesystem::remove_all(dir);
    auto slurp = [](const std::filesystem::path& f) {
        std::ifstream in(f, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    for (PlotKind kind : {PlotKind::ratio_vs_p, PlotKind::tpr_vs_p, PlotKind::fpr_vs_p}) {
        const auto path = emit_plots(rows, kind, dir);
        const std::string first = slurp(path);
        emit_plots(rows, kind, dir);
        EXPECT_EQ(first, slurp(path));
        EXPECT_NE(first.find("<polyline"), std::string::npos);
    }
    // time-vs-tpr needs wall times; a re-read CSV without timing has none
    std::istringstream in(results_csv(rows));
    EXPECT_THROW(build_series(read_results(in), PlotKind::time_vs_tpr), TableError);
    EXPECT_NO_THROW(build_series(rows, PlotKind::time_vs_tpr));
    EXPECT_EQ(parse_plot_kind("tpr-vs-p"), PlotKind::tpr_vs_p);
    EXPECT_THROW(parse_plot_kind("pie"), InvalidArgument);
    std::filesystem::remove_all(dir);
}
