#ifndef CAUSAL_PERM_MORAL_HPP
#define CAUSAL_PERM_MORAL_HPP

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "dseparation.hpp"
#include "permutation.hpp"
#include "ugraph.hpp"

namespace causal_perm {

/// Edges that disappear (`removed`) and appear (`filled`) among the
/// remaining vertices when one vertex is marginalized out.
struct EdgeDelta {
    std::vector<Edge> removed;
    std::vector<Edge> filled;

    std::size_t removal_score() const { return removed.size(); }
    std::size_t fill_score() const { return filled.size(); }
};

/// Compares `before`, restricted to the vertices of `after`, with `after`.
inline EdgeDelta edge_delta(const UGraph& before, const UGraph& after) {
    EdgeDelta delta;
    const auto& vs = after.vertices();
    for (std::size_t a = 0; a < vs.size(); ++a) {
        for (std::size_t b = a + 1; b < vs.size(); ++b) {
            const bool old_edge = before.adjacent(vs[a], vs[b]);
            const bool new_edge = after.adjacent(vs[a], vs[b]);
            if (old_edge && !new_edge) delta.removed.emplace_back(vs[a], vs[b]);
            if (!old_edge && new_edge) delta.filled.emplace_back(vs[a], vs[b]);
        }
    }
    return delta;
}

/// Moral subgraph over `V`: edge i-j iff i and j are d-connected given
/// the rest of `V`. Over all vertices this is the moral graph.
inline UGraph moral_subgraph(const Dag& dag, std::span<const Vertex> V) {
    UGraph g(dag.size(), V);
    const auto& vs = g.vertices();
    std::vector<char> mask(dag.size(), 0);
    for (Vertex v : vs) mask[v] = 1;
    for (std::size_t a = 0; a < vs.size(); ++a) {
        // Conditioning on V minus {i, j}: reachability from i with i's own
        // bit cleared, then j's bit cleared per target.
        mask[vs[a]] = 0;
        for (std::size_t b = a + 1; b < vs.size(); ++b) {
            mask[vs[b]] = 0;
            if (detail::d_reachable(dag, vs[a], mask)[vs[b]]) g.add_edge(vs[a], vs[b]);
            mask[vs[b]] = 1;
        }
        mask[vs[a]] = 1;
    }
    return g;
}

inline UGraph moral_graph(const Dag& dag) {
    UGraph all(dag.size());
    return moral_subgraph(dag, all.vertices());
}

/// Marginalizes `k` out of the moral subgraph `g` of `dag`, returning the
/// moral subgraph over the remaining vertices and the edge delta.
inline std::pair<UGraph, EdgeDelta> marginalize(const UGraph& g, const Dag& dag, Vertex k) {
    g.check_member(k);
    UGraph rest = g.without(k);
    UGraph next = moral_subgraph(dag, rest.vertices());
    EdgeDelta delta = edge_delta(g, next);
    return {std::move(next), std::move(delta)};
}

/// Number of non-adjacent neighbour pairs of `k`; the fill created by
/// eliminating `k` from `g`.
inline std::size_t fill_score_local(const UGraph& g, Vertex k) {
    const auto nbrs = g.neighbors(k);
    std::size_t fill = 0;
    for (std::size_t a = 0; a < nbrs.size(); ++a)
        for (std::size_t b = a + 1; b < nbrs.size(); ++b)
            fill += !g.adjacent(nbrs[a], nbrs[b]);
    return fill;
}

/// Vertices of `V` with no proper descendant in `V`.
inline std::vector<Vertex> maximal_nodes(const Dag& dag, std::span<const Vertex> V) {
    std::vector<char> in(dag.size(), 0);
    for (Vertex v : V) {
        dag.check_vertex(v);
        in[v] = 1;
    }
    std::vector<Vertex> out;
    for (Vertex v = 0; v < dag.size(); ++v) {
        if (!in[v]) continue;
        const auto desc = dag.descendants(v);
        bool maximal = true;
        for (Vertex u = 0; u < dag.size() && maximal; ++u) maximal = !(desc[u] && in[u]);
        if (maximal) out.push_back(v);
    }
    return out;
}

struct EliminationResult {
    /// graphs[0] is the input; graphs[t + 1] follows eliminating order[t].
    std::vector<UGraph> graphs;
    std::size_t fill = 0;
};

/// Vertex elimination: delete each vertex in turn and pairwise-connect
/// its current neighbours.
inline EliminationResult eliminate(const UGraph& g, const Permutation& order) {
    EliminationResult result;
    result.graphs.reserve(order.size() + 1);
    result.graphs.push_back(g);
    UGraph cur = g;
    for (Vertex k : order.order()) {
        cur.check_member(k);
        const auto nbrs = cur.neighbors(k);
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
                if (!cur.adjacent(nbrs[a], nbrs[b])) {
                    cur.add_edge(nbrs[a], nbrs[b]);
                    ++result.fill;
                }
            }
        }
        cur.remove_vertex(k);
        result.graphs.push_back(cur);
    }
    return result;
}

}  // namespace causal_perm

#endif
