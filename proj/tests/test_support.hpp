// Shared fixtures and brute-force oracles for the test suites. Nothing in
// here calls into the reachability-based d-separation of the library.
#ifndef CAUSAL_PERM_TESTS_TEST_SUPPORT_HPP
#define CAUSAL_PERM_TESTS_TEST_SUPPORT_HPP

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include <causal_perm/causal_perm.hpp>

namespace cpt {

using namespace causal_perm;

inline Dag make_dag(int p, std::initializer_list<std::pair<int, int>> one_based) {
    std::vector<Arc> arcs;
    for (auto [a, b] : one_based) arcs.push_back({a - 1, b - 1, std::nullopt});
    return Dag(p, std::move(arcs));
}

inline std::vector<Vertex> one_based(std::initializer_list<int> ids) {
    std::vector<Vertex> out;
    for (int v : ids) out.push_back(v - 1);
    return out;
}

inline std::vector<Vertex> all_vertices(int p) {
    std::vector<Vertex> v(p);
    for (int i = 0; i < p; ++i) v[i] = i;
    return v;
}

inline std::vector<Vertex> subset_from_mask(unsigned mask, int p) {
    std::vector<Vertex> out;
    for (int i = 0; i < p; ++i)
        if (mask >> i & 1u) out.push_back(i);
    return out;
}

/// Random DAG: random order, each forward pair independently with `prob`.
inline Dag random_dag(int p, double prob, std::mt19937_64& rng) {
    std::vector<int> order = all_vertices(p);
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution coin(prob);
    std::vector<Arc> arcs;
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
            if (coin(rng)) arcs.push_back({order[a], order[b], std::nullopt});
    return Dag(p, std::move(arcs));
}

/// Visits every labelled DAG on p vertices (each unordered pair absent,
/// forward or backward; cyclic assignments skipped).
inline void for_each_dag(int p, const std::function<void(const Dag&)>& fn) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
    std::vector<int> state(pairs.size(), 0);
    for (;;) {
        std::vector<std::vector<int>> children(p);
        std::vector<Arc> arcs;
        for (std::size_t e = 0; e < pairs.size(); ++e) {
            if (state[e] == 1) {
                arcs.push_back({pairs[e].first, pairs[e].second, std::nullopt});
                children[pairs[e].first].push_back(pairs[e].second);
            } else if (state[e] == 2) {
                arcs.push_back({pairs[e].second, pairs[e].first, std::nullopt});
                children[pairs[e].second].push_back(pairs[e].first);
            }
        }
        // cycle check by repeated source removal
        std::vector<int> indeg(p, 0);
        for (const auto& a : arcs) ++indeg[a.to];
        std::vector<int> stack;
        for (int v = 0; v < p; ++v)
            if (!indeg[v]) stack.push_back(v);
        int seen = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            ++seen;
            for (int c : children[v])
                if (--indeg[c] == 0) stack.push_back(c);
        }
        if (seen == p) fn(Dag(p, std::move(arcs)));
        std::size_t e = 0;
        while (e < state.size() && state[e] == 2) state[e++] = 0;
        if (e == state.size()) return;
        ++state[e];
    }
}

/// d-separation by enumerating every simple path of the skeleton and
/// checking each interior vertex against the blocking rules.
inline bool brute_force_d_separated(const Dag& dag, Vertex i, Vertex j, const std::vector<Vertex>& given) {
    const int p = dag.size();
    std::vector<char> in_s(p, 0);
    for (Vertex s : given) in_s[s] = 1;
    // descendant-or-self of a collider in S
    auto opens = [&](Vertex c) {
        if (in_s[c]) return true;
        const auto desc = dag.descendants(c);
        for (Vertex v = 0; v < p; ++v)
            if (desc[v] && in_s[v]) return true;
        return false;
    };
    std::vector<Vertex> path{i};
    std::vector<char> on_path(p, 0);
    on_path[i] = 1;
    std::function<bool(Vertex)> active_path_exists = [&](Vertex v) -> bool {
        if (v == j) {
            for (std::size_t t = 1; t + 1 < path.size(); ++t) {
                const Vertex a = path[t - 1], m = path[t], b = path[t + 1];
                const bool collider = dag.has_arc(a, m) && dag.has_arc(b, m);
                if (collider ? !opens(m) : in_s[m]) return false;
            }
            return true;
        }
        for (Vertex u = 0; u < p; ++u) {
            if (on_path[u] || !(dag.has_arc(v, u) || dag.has_arc(u, v))) continue;
            on_path[u] = 1;
            path.push_back(u);
            const bool found = active_path_exists(u);
            path.pop_back();
            on_path[u] = 0;
            if (found) return true;
        }
        return false;
    };
    return !active_path_exists(i);
}

/// Every d-separation statement entailed by `candidate` holds in `truth`.
/// Statements are enumerated over all pairs and all conditioning sets.
inline bool is_imap(const Dag& candidate, const Dag& truth) {
    const int p = truth.size();
    for (Vertex i = 0; i < p; ++i) {
        for (Vertex j = i + 1; j < p; ++j) {
            const unsigned rest = ((1u << p) - 1) & ~(1u << i) & ~(1u << j);
            for (unsigned m = rest;; m = (m - 1) & rest) {
                const auto s = subset_from_mask(m, p);
                if (d_separated(candidate, i, j, s) && !d_separated(truth, i, j, s)) return false;
                if (m == 0) break;
            }
        }
    }
    return true;
}

inline bool markov_equivalent(const Dag& a, const Dag& b) { return is_imap(a, b) && is_imap(b, a); }

inline Dag without_arc(const Dag& dag, std::size_t index) {
    std::vector<Arc> arcs = dag.arcs();
    arcs.erase(arcs.begin() + static_cast<long>(index));
    return Dag(dag.size(), std::move(arcs));
}

/// Random SPD matrix A A^T + m I.
inline Eigen::MatrixXd random_spd(int m, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = normal(rng);
    return a * a.transpose() + m * Eigen::MatrixXd::Identity(m, m);
}

/// Inverse of cov restricted to `rows` (ordered), by direct LU inversion.
inline Eigen::MatrixXd direct_marginal_precision(const Eigen::MatrixXd& cov, const std::vector<Vertex>& rows) {
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = cov(rows[a], rows[b]);
    return sub.fullPivLu().inverse();
}

inline double max_relative_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
    return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

}  // namespace cpt

#endif
