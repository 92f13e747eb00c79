#ifndef CAUSAL_PERM_BENCHGEN_HPP
#define CAUSAL_PERM_BENCHGEN_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gaussian.hpp"

namespace causal_perm {

namespace detail {

// Recursive-descent evaluator for density expressions such as "0.5",
// "3/p", "1/(p-1)" or "2*log(p)/p".
class DensityExpr {
public:
    DensityExpr(std::string_view text, double p) : s_(text), p_(p) {}

    double evaluate() {
        const double v = sum();
        skip_space();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    double sum() {
        double v = product();
        for (;;) {
            if (eat('+')) v += product();
            else if (eat('-')) v -= product();
            else return v;
        }
    }

    double product() {
        double v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }

    double unary() {
        if (eat('-')) return -unary();
        double v = atom();
        if (eat('^')) v = std::pow(v, unary());
        return v;
    }

    double atom() {
        skip_space();
        if (eat('(')) {
            const double v = sum();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
            std::size_t used = 0;
            const double v = std::stod(std::string(s_.substr(pos_)), &used);
            pos_ += used;
            return v;
        }
        std::string ident;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ident += s_[pos_++];
        if (ident == "p") return p_;
        if (ident == "log" || ident == "sqrt") {
            if (!eat('(')) fail("expected '(' after " + ident);
            const double arg = sum();
            if (!eat(')')) fail("missing ')'");
            return ident == "log" ? std::log(arg) : std::sqrt(arg);
        }
        fail(ident.empty() ? "expected a number or 'p'" : "unknown identifier '" + ident + "'");
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw InvalidArgument("density expression '" + std::string(s_) + "': " + msg);
    }

    std::string_view s_;
    double p_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Evaluates a density given as a literal or an expression in p.
inline double parse_density(std::string_view text, int p) {
    const double rho = detail::DensityExpr(text, p).evaluate();
    detail::require(std::isfinite(rho) && rho > 0.0 && rho <= 1.0,
                    "density '" + std::string(text) + "' evaluates outside (0, 1]");
    return rho;
}

struct GenConfig {
    int p = 10;
    double rho = 0.5;
    double weight_low = 0.25;
    double weight_high = 1.0;
    std::uint64_t seed = 0;
    /// Noise variances uniform in [0.5, 1.5] instead of 1.
    bool random_noise = false;

    void validate() const {
        detail::require(p >= 1, "GenConfig: p must be >= 1");
        detail::require(rho > 0.0 && rho <= 1.0, "GenConfig: rho must be in (0, 1]");
        detail::require(weight_low > 0.0 && weight_low < weight_high,
                        "GenConfig: need 0 < weight_low < weight_high");
    }
};

namespace detail {

inline double signed_weight(std::mt19937_64& rng, double low, double high) {
    std::uniform_real_distribution<double> mag(low, high);
    std::bernoulli_distribution negative(0.5);
    const double w = mag(rng);
    return negative(rng) ? -w : w;
}

}  // namespace detail

/// Random topological order, each forward pair an arc with probability
/// rho, weights uniform on [-high, -low] U [low, high].
inline GaussianSem erdos_renyi_dag(const GenConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::vector<Vertex> order(cfg.p);
    for (int i = 0; i < cfg.p; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution coin(cfg.rho);
    std::vector<Arc> arcs;
    for (int a = 0; a < cfg.p; ++a)
        for (int b = a + 1; b < cfg.p; ++b)
            if (coin(rng))
                arcs.push_back({order[a], order[b], detail::signed_weight(rng, cfg.weight_low, cfg.weight_high)});
    Eigen::VectorXd noise = Eigen::VectorXd::Ones(cfg.p);
    if (cfg.random_noise) {
        std::uniform_real_distribution<double> var(0.5, 1.5);
        for (int i = 0; i < cfg.p; ++i) noise[i] = var(rng);
    }
    return GaussianSem(Dag(cfg.p, std::move(arcs)), std::move(noise));
}

/// Attaches random signed weights to an unweighted DAG (unit noise).
inline GaussianSem with_random_weights(const Dag& dag, std::uint64_t seed, double low = 0.25,
                                       double high = 1.0) {
    std::mt19937_64 rng(seed);
    std::vector<Arc> arcs;
    for (const Arc& a : dag.arcs()) arcs.push_back({a.from, a.to, detail::signed_weight(rng, low, high)});
    return GaussianSem(Dag(dag.size(), std::move(arcs)));
}

constexpr long choose2(long n) { return n * (n - 1) / 2; }

/// Dense family on K + C(K,2) vertices: vertex K+t has the t-th
/// lexicographic 2-subset of the first K vertices as parents, and the last
/// C(K,2) vertices form a complete DAG in numeric order.
inline Dag dense_bk(int k) {
    detail::require(k >= 2, "dense_bk: K must be >= 2");
    const int tail = static_cast<int>(choose2(k));
    std::vector<Arc> arcs;
    int t = 0;
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b, ++t) {
            arcs.push_back({a, k + t, std::nullopt});
            arcs.push_back({b, k + t, std::nullopt});
        }
    }
    for (int i = 0; i < tail; ++i)
        for (int j = i + 1; j < tail; ++j) arcs.push_back({k + i, k + j, std::nullopt});
    return Dag(k + tail, std::move(arcs));
}

/// Ancestral sampling; `n` i.i.d. rows.
inline Eigen::MatrixXd sample_data(const GaussianSem& model, long n, std::uint64_t seed) {
    detail::require(n >= 1, "sample_data: n must be >= 1");
    const Dag& dag = model.dag();
    const int p = dag.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd sd = model.noise_variances().cwiseSqrt();
    Eigen::MatrixXd x(n, p);
    for (long r = 0; r < n; ++r) {
        for (Vertex j : dag.topological_order()) {
            double v = sd[j] * normal(rng);
            for (Vertex i : dag.parents(j)) v += *dag.weight(i, j) * x(r, i);
            x(r, j) = v;
        }
    }
    return x;
}

struct Metrics {
    std::size_t true_edges = 0;
    std::size_t estimated_edges = 0;
    /// |E(estimate)| / |E(truth)|; NaN when the truth has no edges.
    double edge_ratio = std::numeric_limits<double>::quiet_NaN();
    /// Set when the truth has no edges and neither does the estimate.
    bool exact_recovery = false;
    double tpr = 0.0;
    double fpr = 0.0;
    std::size_t shd = 0;
    double wall_time = 0.0;
};

/// Edge ratio plus skeleton TPR/FPR and SHD (skeleton differences plus
/// reversed orientations on shared adjacencies).
inline Metrics evaluate(const Dag& truth, const Dag& estimate) {
    detail::require(truth.size() == estimate.size(), "evaluate: vertex sets differ");
    const int p = truth.size();
    Metrics m;
    m.true_edges = truth.num_arcs();
    m.estimated_edges = estimate.num_arcs();
    if (m.true_edges > 0) {
        m.edge_ratio = static_cast<double>(m.estimated_edges) / static_cast<double>(m.true_edges);
    } else {
        m.exact_recovery = m.estimated_edges == 0;
    }
    std::size_t tp = 0, fp = 0, reversed = 0;
    for (const Arc& a : estimate.arcs()) {
        if (truth.has_arc(a.from, a.to)) {
            ++tp;
        } else if (truth.has_arc(a.to, a.from)) {
            ++tp;
            ++reversed;
        } else {
            ++fp;
        }
    }
    const std::size_t fn = m.true_edges - tp;
    const std::size_t negatives = static_cast<std::size_t>(choose2(p)) - m.true_edges;
    m.tpr = m.true_edges ? static_cast<double>(tp) / static_cast<double>(m.true_edges) : 1.0;
    m.fpr = negatives ? static_cast<double>(fp) / static_cast<double>(negatives) : 0.0;
    m.shd = fp + fn + reversed;
    return m;
}

}  // namespace causal_perm

#endif
