#ifndef CAUSAL_PERM_GAUSSIAN_HPP
#define CAUSAL_PERM_GAUSSIAN_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "dag.hpp"

namespace causal_perm {

/// Linear-Gaussian SEM X = B^T X + eps, eps ~ N(0, diag(noise)).
class GaussianSem {
public:
    GaussianSem() = default;

    /// `dag` must be weighted; noise variances default to 1.
    explicit GaussianSem(Dag dag) : GaussianSem(dag, Eigen::VectorXd::Ones(dag.size())) {}

    GaussianSem(Dag dag, Eigen::VectorXd noise) : dag_(std::move(dag)), noise_(std::move(noise)) {
        detail::require(dag_.weighted() || dag_.num_arcs() == 0, "GaussianSem: DAG must carry weights");
        detail::require(noise_.size() == dag_.size(), "GaussianSem: noise vector length mismatch");
        for (Eigen::Index i = 0; i < noise_.size(); ++i)
            detail::require(noise_[i] > 0.0 && std::isfinite(noise_[i]),
                            "GaussianSem: noise variances must be positive");
    }

    const Dag& dag() const { return dag_; }
    int size() const { return dag_.size(); }
    const Eigen::VectorXd& noise_variances() const { return noise_; }

    /// B(i, j) is the weight of i -> j.
    Eigen::MatrixXd weights() const {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(size(), size());
        for (const Arc& a : dag_.arcs()) b(a.from, a.to) = *a.weight;
        return b;
    }

private:
    Dag dag_;
    Eigen::VectorXd noise_;
};

/// Sigma = (I - B)^{-T} Omega (I - B)^{-1}.
inline Eigen::MatrixXd sem_covariance(const GaussianSem& model) {
    const int p = model.size();
    const Eigen::MatrixXd i_minus_b = Eigen::MatrixXd::Identity(p, p) - model.weights();
    // I - B is unit triangular under a topological relabeling, so LU is exact enough.
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(i_minus_b);
    const Eigen::MatrixXd inv = lu.inverse();
    if (!inv.allFinite()) throw std::runtime_error("sem_covariance: factorization failed");
    Eigen::MatrixXd sigma = inv.transpose() * model.noise_variances().asDiagonal() * inv;
    return 0.5 * (sigma + sigma.transpose());
}

/// Theta = (I - B) Omega^{-1} (I - B)^T, without inverting anything.
inline Eigen::MatrixXd sem_precision(const GaussianSem& model) {
    const int p = model.size();
    const Eigen::MatrixXd i_minus_b = Eigen::MatrixXd::Identity(p, p) - model.weights();
    const Eigen::VectorXd inv_noise = model.noise_variances().cwiseInverse();
    return i_minus_b * inv_noise.asDiagonal() * i_minus_b.transpose();
}

/// Maximum-likelihood (1/n) covariance of the rows of `data`.
inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& data) {
    detail::require(data.rows() >= 1, "sample_covariance: no rows");
    const Eigen::RowVectorXd mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - mean;
    return (centered.transpose() * centered) / static_cast<double>(data.rows());
}

/// Inverse of an SPD matrix; throws if the Cholesky factorization fails.
inline Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw std::runtime_error("matrix is not positive definite");
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    return 0.5 * (inv + inv.transpose());
}

/// Marginal precision over an ordered active vertex set.
struct PrecisionState {
    std::vector<Vertex> vertices;
    Eigen::MatrixXd theta;
    /// 0 in exact (noiseless) mode.
    long sample_size = 0;

    int index_of(Vertex v) const {
        auto it = std::find(vertices.begin(), vertices.end(), v);
        if (it == vertices.end()) throw InvalidArgument("vertex " + std::to_string(v) + " not active");
        return static_cast<int>(it - vertices.begin());
    }
};

inline PrecisionState make_precision_state(Eigen::MatrixXd theta, long sample_size = 0) {
    detail::require(theta.rows() == theta.cols(), "PrecisionState: theta must be square");
    PrecisionState s;
    s.vertices.resize(theta.rows());
    for (Eigen::Index i = 0; i < theta.rows(); ++i) s.vertices[i] = static_cast<Vertex>(i);
    s.theta = std::move(theta);
    s.sample_size = sample_size;
    return s;
}

inline constexpr double kDegeneratePivot = 1e-12;

/// Schur complement removing `k`: theta_ij - theta_ik theta_jk / theta_kk.
inline PrecisionState marginal_precision_update(const PrecisionState& state, Vertex k) {
    const int idx = state.index_of(k);
    const double pivot = state.theta(idx, idx);
    if (!(pivot > kDegeneratePivot))
        throw DegenerateMarginal("marginal_precision_update: pivot for vertex " + std::to_string(k) +
                                 " is " + std::to_string(pivot));
    const auto m = static_cast<Eigen::Index>(state.vertices.size());
    PrecisionState next;
    next.sample_size = state.sample_size;
    next.vertices.reserve(m - 1);
    for (Eigen::Index i = 0; i < m; ++i)
        if (i != idx) next.vertices.push_back(state.vertices[i]);
    next.theta.resize(m - 1, m - 1);
    for (Eigen::Index i = 0, a = 0; i < m; ++i) {
        if (i == idx) continue;
        const double scaled = state.theta(i, idx) / pivot;
        for (Eigen::Index j = 0, b = 0; j < m; ++j) {
            if (j == idx) continue;
            next.theta(a, b) = state.theta(i, j) - scaled * state.theta(j, idx);
            ++b;
        }
        ++a;
    }
    return next;
}

/// K_ij = -theta_ij / sqrt(theta_ii theta_jj), unit diagonal.
inline Eigen::MatrixXd partial_correlations(const PrecisionState& state) {
    const Eigen::MatrixXd& t = state.theta;
    const Eigen::Index m = t.rows();
    Eigen::VectorXd inv_sd(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!(t(i, i) > 0.0)) throw InvalidArgument("partial_correlations: nonpositive diagonal");
        inv_sd[i] = 1.0 / std::sqrt(t(i, i));
    }
    Eigen::MatrixXd k(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            k(i, j) = i == j ? 1.0 : std::clamp(-t(i, j) * inv_sd[i] * inv_sd[j], -1.0, 1.0);
    return k;
}

/// sqrt(n - s - 3) * |atanh(rho)|; +inf when |rho| >= 1.
inline double fisher_z(double rho_hat, long n, long s) {
    if (n - s - 3 <= 0)
        throw InsufficientSamples("fisher_z: need n - s - 3 > 0 (n=" + std::to_string(n) +
                                  ", s=" + std::to_string(s) + ")");
    if (!(std::abs(rho_hat) < 1.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(static_cast<double>(n - s - 3)) * std::abs(std::atanh(rho_hat));
}

inline double normal_quantile(double prob) {
    detail::require(prob > 0.0 && prob < 1.0, "normal_quantile: probability must be in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

/// Two-sided critical value Phi^{-1}(1 - alpha/2).
inline double fisher_z_critical(double alpha) {
    detail::require(alpha > 0.0 && alpha < 1.0, "alpha must be in (0,1)");
    return normal_quantile(1.0 - alpha / 2.0);
}

enum class CiMode { exact_threshold, fisher_z };

struct CiTestConfig {
    double alpha = 0.001;
    CiMode mode = CiMode::exact_threshold;
    double exact_tol = 1e-8;

    void validate() const {
        detail::require(alpha > 0.0 && alpha < 1.0, "CiTestConfig: alpha must be in (0,1)");
        detail::require(exact_tol >= 0.0, "CiTestConfig: exact_tol must be >= 0");
    }
};

/// Partial-correlation CI tests computed from a covariance matrix, one
/// submatrix inversion per query. Sample mode needs `sample_size`.
class GaussianCi {
public:
    GaussianCi(Eigen::MatrixXd covariance, CiTestConfig cfg, long sample_size = 0)
        : cov_(std::move(covariance)), cfg_(cfg), n_(sample_size) {
        cfg_.validate();
        if (cfg_.mode == CiMode::fisher_z) critical_ = fisher_z_critical(cfg_.alpha);
    }

    int size() const { return static_cast<int>(cov_.rows()); }

    bool independent(Vertex i, Vertex j, std::span<const Vertex> given) const {
        std::vector<Vertex> idx{i, j};
        idx.insert(idx.end(), given.begin(), given.end());
        const auto m = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd sub(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = cov_(idx[a], idx[b]);
        const Eigen::MatrixXd theta = spd_inverse(sub);
        const double rho = -theta(0, 1) / std::sqrt(theta(0, 0) * theta(1, 1));
        if (cfg_.mode == CiMode::exact_threshold) return std::abs(rho) <= cfg_.exact_tol;
        return fisher_z(rho, n_, static_cast<long>(given.size())) < critical_;
    }

private:
    Eigen::MatrixXd cov_;
    CiTestConfig cfg_;
    long n_;
    double critical_ = 0.0;
};

}  // namespace causal_perm

#endif
