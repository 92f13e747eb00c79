#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace causal_perm;

TEST(ErdosRenyi, FullDensityIsComplete) {
    GenConfig cfg;
    cfg.p = 9;
    cfg.rho = 1.0;
    cfg.seed = 3;
    EXPECT_EQ(erdos_renyi_dag(cfg).dag().num_arcs(), 36u);
}

TEST(ErdosRenyi, MeanEdgeCountWithinThreeStandardErrors) {
    GenConfig cfg;
    cfg.p = 15;
    cfg.rho = 0.2;
    const int draws = 2000;
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < draws; ++i) {
        cfg.seed = derive_seed(5, i);
        const double m = static_cast<double>(erdos_renyi_dag(cfg).dag().num_arcs());
        sum += m;
        sum_sq += m * m;
    }
    const double mean = sum / draws;
    const double expected = cfg.rho * 105;
    const double se = std::sqrt(105 * cfg.rho * (1 - cfg.rho) / draws);
    EXPECT_NEAR(mean, expected, 3 * se);
    EXPECT_GT(sum_sq / draws - mean * mean, 0.0);
}

TEST(ErdosRenyi, WeightsBoundedAwayFromZero) {
    GenConfig cfg;
    cfg.p = 20;
    cfg.rho = 0.5;
    bool negative = false, positive = false;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        cfg.seed = seed;
        const GaussianSem sem = erdos_renyi_dag(cfg);
        for (const Arc& a : sem.dag().arcs()) {
            EXPECT_GE(std::abs(*a.weight), 0.25);
            EXPECT_LE(std::abs(*a.weight), 1.0);
            (*a.weight < 0 ? negative : positive) = true;
        }
    }
    EXPECT_TRUE(negative && positive);
}

TEST(ErdosRenyi, SeededAndValidated) {
    GenConfig cfg;
    cfg.p = 12;
    cfg.rho = 0.3;
    cfg.seed = 44;
    EXPECT_EQ(erdos_renyi_dag(cfg).dag(), erdos_renyi_dag(cfg).dag());
    cfg.rho = 0.0;
    EXPECT_THROW(erdos_renyi_dag(cfg), InvalidArgument);
    cfg.rho = 0.5;
    cfg.p = 0;
    EXPECT_THROW(erdos_renyi_dag(cfg), InvalidArgument);
    cfg.p = 5;
    cfg.random_noise = true;
    const auto noise = erdos_renyi_dag(cfg).noise_variances();
    EXPECT_GE(noise.minCoeff(), 0.5);
    EXPECT_LE(noise.maxCoeff(), 1.5);
}

TEST(DenseBk, CountsAndStructure) {
    for (int k = 2; k <= 8; ++k) {
        const long tail = k * (k - 1) / 2;
        const long p = k + tail;
        const Dag bk = dense_bk(k);
        ASSERT_EQ(bk.size(), p);
        EXPECT_EQ(static_cast<long>(bk.num_arcs()), 2 * tail + tail * (tail - 1) / 2);
        const long missing = p * (p - 1) / 2 - static_cast<long>(bk.num_arcs());
        EXPECT_LT(missing, tail + k * tail);
        for (Vertex a = 0; a < k; ++a)
            for (Vertex b = 0; b < k; ++b) EXPECT_FALSE(bk.has_arc(a, b));
    }
    const Dag b4 = dense_bk(4);
    EXPECT_EQ(b4.size(), 10);
    EXPECT_EQ(b4.num_arcs(), 27u);
    // vertex 5 takes {1,2}, vertex 10 takes {3,4}
    EXPECT_EQ(b4.parents(4), cpt::one_based({1, 2}));
    EXPECT_TRUE(b4.has_arc(2, 9) && b4.has_arc(3, 9));
    EXPECT_THROW(dense_bk(1), InvalidArgument);
}

TEST(DenseBk, DensityApproachesOne) {
    // missing / possible = O(K^3) / O(K^4), so K times it stays bounded
    double last = 0;
    for (int k = 3; k <= 40; ++k) {
        const Dag bk = dense_bk(k);
        const double possible = bk.size() * (bk.size() - 1) / 2.0;
        const double density = bk.num_arcs() / possible;
        EXPECT_GE(density, last);
        EXPECT_LE(k * (1 - density), 4.0);
        last = density;
    }
    EXPECT_GT(last, 0.9);
}

TEST(SampleData, IndependentColumnsForEmptyGraph) {
    const long n = 20000;
    const Eigen::MatrixXd x = sample_data(GaussianSem(Dag(4)), n, 9);
    const Eigen::MatrixXd cov = sample_covariance(x);
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(cov(i, i), 1.0, 0.05);
        for (int j = i + 1; j < 4; ++j)
            EXPECT_LE(std::abs(cov(i, j) / std::sqrt(cov(i, i) * cov(j, j))), 4 / std::sqrt(static_cast<double>(n)));
    }
}

TEST(SampleData, SingleEdgeCovariance) {
    const long n = 20000;
    const Eigen::MatrixXd cov = sample_covariance(sample_data(GaussianSem(Dag(2, {{0, 1, 0.5}})), n, 10));
    EXPECT_NEAR(cov(0, 1), 0.5, 5 / std::sqrt(static_cast<double>(n)));
    EXPECT_NEAR(cov(1, 1), 1.25, 10 / std::sqrt(static_cast<double>(n)));
}

TEST(SampleData, ConvergesToModelCovariance) {
    GenConfig cfg;
    cfg.p = 6;
    cfg.rho = 0.5;
    cfg.seed = 12;
    const GaussianSem sem = erdos_renyi_dag(cfg);
    const Eigen::MatrixXd truth = sem_covariance(sem);
    const double err_small = (sample_covariance(sample_data(sem, 1000, 1)) - truth).cwiseAbs().maxCoeff();
    const double err_large = (sample_covariance(sample_data(sem, 100000, 1)) - truth).cwiseAbs().maxCoeff();
    EXPECT_LT(err_large, err_small);
    EXPECT_LT(err_large, 0.05);
}

TEST(SampleData, DeterministicForSeed) {
    const GaussianSem sem(Dag(3, {{0, 1, 0.4}, {1, 2, -0.7}}));
    EXPECT_EQ(sample_data(sem, 50, 3), sample_data(sem, 50, 3));
    EXPECT_NE(sample_data(sem, 50, 3), sample_data(sem, 50, 4));
    EXPECT_THROW(sample_data(sem, 0, 3), InvalidArgument);
}

TEST(Evaluate, IdentityAndRatio) {
    const Dag chain = cpt::make_dag(4, {{1, 2}, {2, 3}, {3, 4}});
    const Metrics same = evaluate(chain, chain);
    EXPECT_DOUBLE_EQ(same.edge_ratio, 1.0);
    EXPECT_DOUBLE_EQ(same.tpr, 1.0);
    EXPECT_DOUBLE_EQ(same.fpr, 0.0);
    EXPECT_EQ(same.shd, 0u);

    const Dag two = cpt::make_dag(4, {{1, 2}, {3, 4}});
    const Dag three = cpt::make_dag(4, {{2, 1}, {3, 4}, {1, 3}});
    const Metrics m = evaluate(two, three);
    EXPECT_DOUBLE_EQ(m.edge_ratio, 1.5);
    EXPECT_DOUBLE_EQ(m.tpr, 1.0);
    EXPECT_DOUBLE_EQ(m.fpr, 0.25);  // one false edge out of 6 - 2 absent pairs
    EXPECT_EQ(m.shd, 2u);           // one extra, one reversed
}

TEST(Evaluate, EmptyTruth) {
    const Metrics m = evaluate(Dag(3), Dag(3));
    EXPECT_TRUE(std::isnan(m.edge_ratio));
    EXPECT_TRUE(m.exact_recovery);
    EXPECT_DOUBLE_EQ(m.tpr, 1.0);
    EXPECT_FALSE(evaluate(Dag(3), cpt::make_dag(3, {{1, 2}})).exact_recovery);
    EXPECT_THROW(evaluate(Dag(3), Dag(4)), InvalidArgument);
}

TEST(Evaluate, RatioOneIffMarkovEquivalentForImaps) {
    // minimal IMAPs of the truth: ratio 1 exactly when Markov equivalent
    std::mt19937_64 rng(17);
    int equivalent = 0, not_equivalent = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const int p = 4 + trial % 3;
        const Dag truth = cpt::random_dag(p, 0.4, rng);
        auto order = cpt::all_vertices(p);
        std::shuffle(order.begin(), order.end(), rng);
        const Dag est = minimal_imap(DsepCi(truth), Permutation(order, p));
        const Metrics m = evaluate(truth, est);
        const bool me = cpt::markov_equivalent(truth, est);
        if (truth.num_arcs() == 0) continue;
        EXPECT_EQ(m.edge_ratio == 1.0, me);
        (me ? equivalent : not_equivalent)++;
    }
    EXPECT_GT(equivalent, 10);
    EXPECT_GT(not_equivalent, 10);
}

TEST(ParseDensity, LiteralsAndExpressions) {
    EXPECT_DOUBLE_EQ(parse_density("0.5", 20), 0.5);
    EXPECT_DOUBLE_EQ(parse_density("3/p", 20), 0.15);
    EXPECT_DOUBLE_EQ(parse_density("1/2", 7), 0.5);
    EXPECT_NEAR(parse_density("log(p)/p", 100), std::log(100.0) / 100, 1e-15);
    EXPECT_NEAR(parse_density("2*sqrt(p)/p^2", 16), 8.0 / 256, 1e-15);
    EXPECT_DOUBLE_EQ(parse_density(" ( 1 + 1 ) / ( p - 2 ) ", 6), 0.5);
    EXPECT_THROW(parse_density("3/p", 2), InvalidArgument);
    EXPECT_THROW(parse_density("0", 10), InvalidArgument);
    EXPECT_THROW(parse_density("p +", 10), InvalidArgument);
    EXPECT_THROW(parse_density("q", 10), InvalidArgument);
    EXPECT_THROW(parse_density("0.5)", 10), InvalidArgument);
}
