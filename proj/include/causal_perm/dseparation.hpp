#ifndef CAUSAL_PERM_DSEPARATION_HPP
#define CAUSAL_PERM_DSEPARATION_HPP

#include <span>
#include <vector>

#include "dag.hpp"

namespace causal_perm {

namespace detail {

// Vertices d-connected to `source` given the conditioning mask, found by
// reachability over (vertex, direction) states. Linear in p + |arcs|.
inline std::vector<char> d_reachable(const Dag& dag, Vertex source, const std::vector<char>& given) {
    const int p = dag.size();

    // Ancestors of the conditioning set (inclusive) decide which colliders open.
    std::vector<char> anc(p, 0);
    std::vector<Vertex> stack;
    for (Vertex v = 0; v < p; ++v)
        if (given[v]) stack.push_back(v);
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        if (anc[v]) continue;
        anc[v] = 1;
        for (Vertex u : dag.parents(v)) stack.push_back(u);
    }

    // dir 0: entered from a child (travelling up); dir 1: entered from a parent.
    std::vector<char> visited(2 * static_cast<std::size_t>(p), 0);
    std::vector<char> reach(p, 0);
    std::vector<std::pair<Vertex, int>> queue{{source, 0}};
    while (!queue.empty()) {
        auto [v, dir] = queue.back();
        queue.pop_back();
        auto& mark = visited[2 * static_cast<std::size_t>(v) + dir];
        if (mark) continue;
        mark = 1;
        if (!given[v]) reach[v] = 1;
        if (dir == 0 && !given[v]) {
            for (Vertex u : dag.parents(v)) queue.emplace_back(u, 0);
            for (Vertex c : dag.children(v)) queue.emplace_back(c, 1);
        } else if (dir == 1) {
            if (!given[v])
                for (Vertex c : dag.children(v)) queue.emplace_back(c, 1);
            if (anc[v])
                for (Vertex u : dag.parents(v)) queue.emplace_back(u, 0);
        }
    }
    return reach;
}

}  // namespace detail

/// True iff every path between `i` and `j` is blocked given `given`.
inline bool d_separated(const Dag& dag, Vertex i, Vertex j, std::span<const Vertex> given) {
    dag.check_vertex(i);
    dag.check_vertex(j);
    detail::require(i != j, "d_separated: i == j");
    std::vector<char> mask(dag.size(), 0);
    for (Vertex s : given) {
        dag.check_vertex(s);
        detail::require(s != i && s != j, "d_separated: endpoint in conditioning set");
        mask[s] = 1;
    }
    return !detail::d_reachable(dag, i, mask)[j];
}

inline bool d_separated(const Dag& dag, Vertex i, Vertex j, std::initializer_list<Vertex> given) {
    return d_separated(dag, i, j, std::span<const Vertex>(given.begin(), given.size()));
}

/// Conditional-independence oracle backed by d-separation in a known DAG.
class DsepCi {
public:
    explicit DsepCi(const Dag& dag) : dag_(&dag) {}

    int size() const { return dag_->size(); }

    bool independent(Vertex i, Vertex j, std::span<const Vertex> given) const {
        return d_separated(*dag_, i, j, given);
    }

private:
    const Dag* dag_;
};

}  // namespace causal_perm

#endif
