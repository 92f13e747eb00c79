#ifndef CAUSAL_PERM_RFD_HPP
#define CAUSAL_PERM_RFD_HPP

#include <algorithm>
#include <chrono>
#include <climits>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "permutation.hpp"

namespace causal_perm {

/// Scores of one node at the moment it was appended to a search path.
struct PathNode {
    Vertex vertex{};
    std::size_t removal = 0;
    std::size_t fill = 0;
    /// Degree in the moral subgraph before the node was marginalized.
    int degree = 0;
    /// Appended through the positive-removal branch (else min-fill).
    bool via_removal = false;
};

/// A candidate extension found by the breadth-first search of one step.
struct SearchPath {
    std::vector<PathNode> nodes;

    std::size_t r() const { return nodes.empty() ? 0 : nodes.back().removal; }
    int d() const { return nodes.empty() ? 0 : nodes.back().degree; }

    std::vector<Vertex> vertices() const {
        std::vector<Vertex> out;
        out.reserve(nodes.size());
        for (const auto& n : nodes) out.push_back(n.vertex);
        return out;
    }
};

struct StepLog {
    /// Nodes in pick order (most downstream first).
    std::vector<PathNode> chosen;
    /// Number of live paths after each search level; empty for baselines.
    std::vector<std::size_t> branches;
    WorkCounters work;
};

struct OrderingResult {
    /// Causal (source-first) order over all vertices.
    Permutation permutation;
    std::vector<StepLog> steps;
    double wall_time = 0.0;
    WorkCounters work;
};

using Clock = std::chrono::steady_clock;

struct RfdOptions {
    int depth = 1;
    /// Caps live paths per level; the lexicographically first ones survive.
    std::optional<std::size_t> max_branch;
    std::optional<Clock::time_point> deadline;
};

/// An oracle failure, annotated with the step at which it happened.
class SearchError : public std::runtime_error {
public:
    SearchError(std::size_t step, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

namespace detail {

inline void check_deadline(const std::optional<Clock::time_point>& deadline) {
    if (deadline && Clock::now() > *deadline) throw Timeout("deadline exceeded");
}

template <MoralOracle O>
O replay(const O& oracle, const SearchPath& path) {
    O out = oracle;
    for (const auto& n : path.nodes) out.marginalize(n.vertex);
    return out;
}

struct CandidateScore {
    Vertex vertex;
    std::size_t removal;
    std::size_t fill;
    int degree;
};

template <MoralOracle O>
std::vector<CandidateScore> score_all(const O& oracle) {
    const UGraph& g = oracle.current_graph();
    std::vector<CandidateScore> scores;
    scores.reserve(g.vertices().size());
    O scratch = oracle;
    for (Vertex k : g.vertices()) {
        const EdgeDelta delta = score_marginalization(oracle, k, scratch);
        scores.push_back({k, delta.removal_score(), delta.fill_score(), g.degree(k)});
    }
    return scores;
}

}  // namespace detail

/// One breadth-first search of depth <= `opts.depth` from the oracle's
/// current vertex set.
///
/// At each level a path is extended by its argmax-removal candidates if
/// any removal score is positive, else by its argmin-fill candidates. The
/// search stops once some path ends in a positive removal score. Among
/// paths attaining the best final removal score, the one with the smallest
/// final degree wins; remaining ties go to the lexicographically smallest
/// vertex sequence.
template <MoralOracle O>
SearchPath rfd_step(const O& oracle, const RfdOptions& opts, std::vector<std::size_t>* branches = nullptr) {
    const auto& active = oracle.current_graph().vertices();
    detail::require(!active.empty(), "rfd_step: empty vertex set");
    detail::require(opts.depth >= 1, "rfd_step: depth must be >= 1");

    std::vector<SearchPath> paths(1);
    std::size_t best_r = 0;
    const int max_level = std::min<int>(opts.depth, static_cast<int>(active.size()));
    for (int level = 0; level < max_level && best_r == 0; ++level) {
        std::vector<SearchPath> next;
        for (const SearchPath& path : paths) {
            detail::check_deadline(opts.deadline);
            const O base = detail::replay(oracle, path);
            const auto scores = detail::score_all(base);

            std::size_t max_r = 0;
            for (const auto& s : scores) max_r = std::max(max_r, s.removal);
            const bool removal_branch = max_r > 0;
            std::size_t min_f = SIZE_MAX;
            for (const auto& s : scores) min_f = std::min(min_f, s.fill);

            for (const auto& s : scores) {
                const bool pick = removal_branch ? s.removal == max_r : s.fill == min_f;
                if (!pick) continue;
                SearchPath extended = path;
                extended.nodes.push_back({s.vertex, s.removal, s.fill, s.degree, removal_branch});
                next.push_back(std::move(extended));
            }
        }
        if (opts.max_branch && next.size() > *opts.max_branch) next.resize(*opts.max_branch);
        paths = std::move(next);
        if (branches) branches->push_back(paths.size());
        for (const auto& path : paths) best_r = std::max(best_r, path.r());
    }

    const SearchPath* best = nullptr;
    for (const auto& path : paths) {
        if (path.r() != best_r) continue;
        // `paths` is already in lexicographic order, so strict < keeps the first.
        if (!best || path.d() < best->d()) best = &path;
    }
    return *best;
}

/// Builds a full ordering by repeated rfd_step calls; the picked
/// sequence is reversed so the result lists upstream vertices first.
template <MoralOracle O>
OrderingResult rfd(const O& oracle, const RfdOptions& opts = {}) {
    detail::require(opts.depth >= 1, "rfd: depth must be >= 1");
    const auto start = Clock::now();
    const WorkCounters before = thread_work_counters();
    O cur = oracle;
    std::vector<Vertex> picked;
    OrderingResult result;
    while (cur.current_graph().num_vertices() > 0) {
        StepLog log;
        const WorkCounters step_before = thread_work_counters();
        try {
            const SearchPath path = rfd_step(cur, opts, &log.branches);
            for (const auto& n : path.nodes) {
                cur.marginalize(n.vertex);
                picked.push_back(n.vertex);
            }
            log.chosen = path.nodes;
        } catch (const Timeout&) {
            throw;
        } catch (const std::exception& e) {
            throw SearchError(result.steps.size(), e.what());
        }
        log.work = thread_work_counters() - step_before;
        result.steps.push_back(std::move(log));
    }
    std::reverse(picked.begin(), picked.end());
    result.permutation = Permutation(std::move(picked), oracle.capacity());
    result.work = thread_work_counters() - before;
    result.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

enum class Baseline { min_degree, min_fill, max_remove, random };

/// Greedy single-node orderings: MD (min degree), MF (min fill),
/// MR (max removal) with seeded uniform tie-breaking, or a uniform
/// random permutation (RP). Picks are reversed as in rfd().
template <MoralOracle O>
OrderingResult baseline_perm(const O& oracle, Baseline strategy, std::uint64_t seed,
                             std::optional<Clock::time_point> deadline = std::nullopt) {
    const auto start = Clock::now();
    const WorkCounters before = thread_work_counters();
    std::mt19937_64 rng(seed);
    OrderingResult result;
    std::vector<Vertex> picked;

    if (strategy == Baseline::random) {
        picked = oracle.current_graph().vertices();
        std::shuffle(picked.begin(), picked.end(), rng);
        for (Vertex v : picked) result.steps.push_back({{PathNode{v}}, {}, {}});
    } else {
        O cur = oracle;
        while (cur.current_graph().num_vertices() > 0) {
            detail::check_deadline(deadline);
            StepLog log;
            const WorkCounters step_before = thread_work_counters();
            try {
                std::vector<detail::CandidateScore> scores;
                if (strategy == Baseline::min_degree) {
                    const UGraph& g = cur.current_graph();
                    for (Vertex k : g.vertices()) scores.push_back({k, 0, 0, g.degree(k)});
                } else {
                    scores = detail::score_all(cur);
                }
                auto key = [strategy](const detail::CandidateScore& s) -> long {
                    switch (strategy) {
                        case Baseline::min_degree: return s.degree;
                        case Baseline::min_fill: return static_cast<long>(s.fill);
                        default: return -static_cast<long>(s.removal);
                    }
                };
                long best = LONG_MAX;
                for (const auto& s : scores) best = std::min(best, key(s));
                std::vector<const detail::CandidateScore*> ties;
                for (const auto& s : scores)
                    if (key(s) == best) ties.push_back(&s);
                std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
                const auto& chosen = *ties[pick(rng)];
                log.chosen.push_back({chosen.vertex, chosen.removal, chosen.fill, chosen.degree,
                                      strategy == Baseline::max_remove && chosen.removal > 0});
                cur.marginalize(chosen.vertex);
                picked.push_back(chosen.vertex);
            } catch (const std::exception& e) {
                throw SearchError(result.steps.size(), e.what());
            }
            log.work = thread_work_counters() - step_before;
            result.steps.push_back(std::move(log));
        }
    }
    std::reverse(picked.begin(), picked.end());
    result.permutation = Permutation(std::move(picked), oracle.capacity());
    result.work = thread_work_counters() - before;
    result.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

}  // namespace causal_perm

#endif
