// Orders the vertices of a few small DAGs with RFD and the greedy
// baselines, then reports the size of each induced minimal IMAP.
#include <cstdio>

#include <causal_perm/causal_perm.hpp>

using namespace causal_perm;

namespace {

void report(const char* label, const Dag& truth) {
    const GaussianSem sem = with_random_weights(truth, 1);
    const DsepCi ci(truth);
    std::printf("%s: %d vertices, %zu edges\n", label, truth.size(), truth.num_arcs());

    for (int w = 1; w <= 2; ++w) {
        const auto res = rfd(GaussianMoralOracle::exact(sem), RfdOptions{w, std::nullopt, std::nullopt});
        const Metrics m = evaluate(truth, minimal_imap(ci, res.permutation));
        std::printf("  rfd-w%d  %3zu edges  ratio %.3f  (%zu steps)\n", w, m.estimated_edges, m.edge_ratio,
                    res.steps.size());
    }
    const struct {
        const char* name;
        Baseline kind;
    } baselines[] = {{"md", Baseline::min_degree},
                     {"mf", Baseline::min_fill},
                     {"mr", Baseline::max_remove},
                     {"rp", Baseline::random}};
    for (const auto& b : baselines) {
        const auto res = baseline_perm(GaussianMoralOracle::exact(sem), b.kind, 7);
        const Metrics m = evaluate(truth, minimal_imap(ci, res.permutation));
        std::printf("  %-6s  %3zu edges  ratio %.3f\n", b.name, m.estimated_edges, m.edge_ratio);
    }
}

}  // namespace

int main() {
    report("B_4", dense_bk(4));

    GenConfig cfg;
    cfg.p = 20;
    cfg.rho = 0.5;
    cfg.seed = 2021;
    report("random p=20 rho=0.5", erdos_renyi_dag(cfg).dag());

    // noisy: the moral graph is estimated from 400 samples
    const GaussianSem sem = erdos_renyi_dag(cfg);
    const Eigen::MatrixXd data = sample_data(sem, 400, 3);
    CiTestConfig tests;
    tests.alpha = 0.001;
    const auto res = rfd(GaussianMoralOracle::from_data(data, tests));
    tests.mode = CiMode::fisher_z;
    const Dag est = minimal_imap(GaussianCi(sample_covariance(data), tests, data.rows()), res.permutation);
    const Metrics m = evaluate(sem.dag(), est);
    std::printf("from 400 samples: tpr %.3f  fpr %.3f  shd %zu\n", m.tpr, m.fpr, m.shd);
}
