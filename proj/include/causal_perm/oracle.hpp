#ifndef CAUSAL_PERM_ORACLE_HPP
#define CAUSAL_PERM_ORACLE_HPP

#include <concepts>
#include <cstdint>
#include <memory>
#include <string>

#include "gaussian.hpp"
#include "moral.hpp"

namespace causal_perm {

/// Work performed on the current thread. Oracles bump these on every
/// marginalization; searches bump `score_evals` once per candidate scored.
struct WorkCounters {
    std::uint64_t marginalizations = 0;
    std::uint64_t entry_ops = 0;
    std::uint64_t score_evals = 0;

    WorkCounters operator-(const WorkCounters& o) const {
        return {marginalizations - o.marginalizations, entry_ops - o.entry_ops, score_evals - o.score_evals};
    }
    WorkCounters& operator+=(const WorkCounters& o) {
        marginalizations += o.marginalizations;
        entry_ops += o.entry_ops;
        score_evals += o.score_evals;
        return *this;
    }
    friend bool operator==(const WorkCounters&, const WorkCounters&) = default;
};

inline WorkCounters& thread_work_counters() {
    thread_local WorkCounters counters;
    return counters;
}

/// Value type exposing the moral subgraph over the active vertices and
/// in-place marginalization. Copies are independent (speculative use).
template <class T>
concept MoralOracle = std::copy_constructible<T> && requires(T& o, const T& co, Vertex k) {
    { co.current_graph() } -> std::convertible_to<const UGraph&>;
    { co.capacity() } -> std::convertible_to<int>;
    o.marginalize(k);
};

/// Moral subgraphs computed by d-separation in a known DAG.
class DsepMoralOracle {
public:
    explicit DsepMoralOracle(const Dag& dag)
        : dag_(std::make_shared<const Dag>(dag)), graph_(moral_graph(*dag_)) {}

    const UGraph& current_graph() const { return graph_; }
    int capacity() const { return dag_->size(); }

    void marginalize(Vertex k) {
        graph_.check_member(k);
        const UGraph rest = graph_.without(k);
        graph_ = moral_subgraph(*dag_, rest.vertices());
        const auto m = static_cast<std::uint64_t>(rest.num_vertices());
        auto& c = thread_work_counters();
        ++c.marginalizations;
        c.entry_ops += m * m;
    }

private:
    std::shared_ptr<const Dag> dag_;
    UGraph graph_;
};

/// Moral subgraph estimated by thresholding partial correlations of a
/// marginal precision matrix, kept current by rank-one updates.
class GaussianMoralOracle {
public:
    /// Noiseless mode: exact SEM precision, |K_ij| > exact_tol is an edge.
    static GaussianMoralOracle exact(const GaussianSem& model, CiTestConfig cfg = {}) {
        cfg.mode = CiMode::exact_threshold;
        return GaussianMoralOracle(make_precision_state(sem_precision(model), 0), cfg);
    }

    /// Sample mode: Fisher-z tests at level cfg.alpha on the sample precision.
    static GaussianMoralOracle from_data(const Eigen::MatrixXd& data, CiTestConfig cfg) {
        const long n = static_cast<long>(data.rows());
        const long p = static_cast<long>(data.cols());
        if (n <= p + 3)
            throw InsufficientSamples("sample oracle needs n > p + 3 (n=" + std::to_string(n) +
                                      ", p=" + std::to_string(p) + ")");
        cfg.mode = CiMode::fisher_z;
        Eigen::MatrixXd theta;
        try {
            theta = spd_inverse(sample_covariance(data));
        } catch (const std::runtime_error&) {
            throw std::runtime_error("sample covariance is not positive definite");
        }
        return GaussianMoralOracle(make_precision_state(std::move(theta), n), cfg);
    }

    GaussianMoralOracle(PrecisionState state, CiTestConfig cfg) : state_(std::move(state)), cfg_(cfg) {
        cfg_.validate();
        if (cfg_.mode == CiMode::fisher_z) {
            detail::require(state_.sample_size > 0, "fisher-z mode needs a sample size");
            critical_ = fisher_z_critical(cfg_.alpha);
        }
        capacity_ = 0;
        for (Vertex v : state_.vertices) capacity_ = std::max(capacity_, v + 1);
        rethreshold();
    }

    const UGraph& current_graph() const { return graph_; }
    int capacity() const { return capacity_; }
    const PrecisionState& state() const { return state_; }
    const CiTestConfig& config() const { return cfg_; }

    void marginalize(Vertex k) {
        state_ = marginal_precision_update(state_, k);
        const auto m = static_cast<std::uint64_t>(state_.vertices.size());
        auto& c = thread_work_counters();
        ++c.marginalizations;
        c.entry_ops += m * m;
        rethreshold();
    }

private:
    void rethreshold() {
        const auto& vs = state_.vertices;
        const auto m = static_cast<Eigen::Index>(vs.size());
        graph_ = UGraph(capacity_, vs);
        const auto& t = state_.theta;
        Eigen::VectorXd inv_sd(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            if (!(t(i, i) > 0.0)) throw DegenerateMarginal("nonpositive marginal precision diagonal");
            inv_sd[i] = 1.0 / std::sqrt(t(i, i));
        }
        const long cond = static_cast<long>(m) - 2;
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i + 1; j < m; ++j) {
                const double rho = std::clamp(-t(i, j) * inv_sd[i] * inv_sd[j], -1.0, 1.0);
                const bool edge = cfg_.mode == CiMode::exact_threshold
                                      ? std::abs(rho) > cfg_.exact_tol
                                      : fisher_z(rho, state_.sample_size, cond) >= critical_;
                if (edge) graph_.add_edge(vs[i], vs[j]);
            }
        }
        thread_work_counters().entry_ops += static_cast<std::uint64_t>(m * m);
    }

    PrecisionState state_;
    CiTestConfig cfg_;
    double critical_ = 0.0;
    int capacity_ = 0;
    UGraph graph_;
};

/// Removal/fill delta from speculatively marginalizing `k`; `after`
/// receives the marginalized oracle.
template <MoralOracle O>
EdgeDelta score_marginalization(const O& oracle, Vertex k, O& after) {
    after = oracle;
    after.marginalize(k);
    auto& c = thread_work_counters();
    ++c.score_evals;
    const auto m = static_cast<std::uint64_t>(after.current_graph().num_vertices());
    c.entry_ops += m * m;
    return edge_delta(oracle.current_graph(), after.current_graph());
}

}  // namespace causal_perm

#endif
