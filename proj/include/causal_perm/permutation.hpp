#ifndef CAUSAL_PERM_PERMUTATION_HPP
#define CAUSAL_PERM_PERMUTATION_HPP

#include <vector>

#include "core.hpp"

namespace causal_perm {

/// Sequence of distinct vertex ids, earliest (most upstream) first.
class Permutation {
public:
    Permutation() = default;

    /// Validates distinctness and that every id lies in 0..p-1.
    Permutation(std::vector<Vertex> order, int p) : order_(std::move(order)) {
        std::vector<char> seen(p > 0 ? p : 0, 0);
        for (Vertex v : order_) {
            detail::require(v >= 0 && v < p, "Permutation: vertex id out of range");
            detail::require(!seen[v], "Permutation: duplicate vertex");
            seen[v] = 1;
        }
    }

    const std::vector<Vertex>& order() const { return order_; }
    std::size_t size() const { return order_.size(); }
    Vertex operator[](std::size_t i) const { return order_[i]; }
    bool covers(int p) const { return static_cast<int>(order_.size()) == p; }

    /// position[v] = index of v in the order, or -1.
    std::vector<int> positions(int p) const {
        std::vector<int> pos(p, -1);
        for (std::size_t i = 0; i < order_.size(); ++i) pos[order_[i]] = static_cast<int>(i);
        return pos;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<Vertex> order_;
};

}  // namespace causal_perm

#endif
