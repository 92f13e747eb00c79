#ifndef CAUSAL_PERM_MINIMAL_IMAP_HPP
#define CAUSAL_PERM_MINIMAL_IMAP_HPP

#include <concepts>
#include <span>
#include <vector>

#include "dag.hpp"
#include "permutation.hpp"

namespace causal_perm {

/// Anything answering "is i independent of j given S" over 0..size()-1.
template <class T>
concept CiOracle = requires(const T& ci, Vertex i, Vertex j, std::span<const Vertex> s) {
    { ci.size() } -> std::convertible_to<int>;
    { ci.independent(i, j, s) } -> std::convertible_to<bool>;
};

/// The DAG induced by `order`: i -> j whenever i precedes j and i is
/// dependent on j given the other predecessors of j.
template <CiOracle Ci>
Dag minimal_imap(const Ci& ci, const Permutation& order) {
    const int p = ci.size();
    detail::require(order.covers(p), "minimal_imap: permutation does not cover all vertices");
    std::vector<Arc> arcs;
    std::vector<Vertex> given;
    for (std::size_t pos = 1; pos < order.size(); ++pos) {
        const Vertex j = order[pos];
        for (std::size_t q = 0; q < pos; ++q) {
            given.clear();
            for (std::size_t r = 0; r < pos; ++r)
                if (r != q) given.push_back(order[r]);
            if (!ci.independent(order[q], j, given)) arcs.push_back({order[q], j, std::nullopt});
        }
    }
    return Dag(p, std::move(arcs));
}

}  // namespace causal_perm

#endif
