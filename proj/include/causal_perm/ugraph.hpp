#ifndef CAUSAL_PERM_UGRAPH_HPP
#define CAUSAL_PERM_UGRAPH_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "core.hpp"

namespace causal_perm {

/// Undirected simple graph on a subset of the ids 0..capacity-1.
///
/// Adjacency is a dense byte matrix, so copies and full scans cost
/// O(capacity^2); this matches the cost model of the Gaussian updates
/// that produce these graphs.
class UGraph {
public:
    UGraph() = default;

    /// Empty graph on the full vertex set 0..capacity-1.
    explicit UGraph(int capacity) : UGraph(capacity, all_vertices(capacity)) {}

    UGraph(int capacity, std::span<const Vertex> vertices)
        : n_(capacity), member_(capacity, 0), adj_(static_cast<std::size_t>(capacity) * capacity, 0) {
        detail::require(capacity >= 0, "UGraph: negative capacity");
        for (Vertex v : vertices) {
            detail::require(v >= 0 && v < capacity, "UGraph: vertex out of range");
            detail::require(!member_[v], "UGraph: duplicate vertex");
            member_[v] = 1;
        }
        rebuild_vertex_list();
    }

    int capacity() const { return n_; }
    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    /// Active vertices in increasing order.
    const std::vector<Vertex>& vertices() const { return vertices_; }
    bool contains(Vertex v) const { return v >= 0 && v < n_ && member_[v]; }

    bool adjacent(Vertex a, Vertex b) const {
        return adj_[static_cast<std::size_t>(a) * n_ + b] != 0;
    }

    void add_edge(Vertex a, Vertex b) {
        check_pair(a, b);
        set(a, b, 1);
    }

    void remove_edge(Vertex a, Vertex b) {
        check_pair(a, b);
        set(a, b, 0);
    }

    /// Removes `v` and its incident edges.
    void remove_vertex(Vertex v) {
        check_member(v);
        for (Vertex u : vertices_) set(u, v, 0);
        member_[v] = 0;
        rebuild_vertex_list();
    }

    std::vector<Vertex> neighbors(Vertex v) const {
        check_member(v);
        std::vector<Vertex> out;
        for (Vertex u : vertices_)
            if (adjacent(v, u)) out.push_back(u);
        return out;
    }

    int degree(Vertex v) const {
        check_member(v);
        int d = 0;
        const auto* row = &adj_[static_cast<std::size_t>(v) * n_];
        for (Vertex u : vertices_) d += row[u];
        return d;
    }

    std::size_t num_edges() const {
        std::size_t m = 0;
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            for (std::size_t j = i + 1; j < vertices_.size(); ++j)
                m += adjacent(vertices_[i], vertices_[j]);
        return m;
    }

    /// Edges sorted lexicographically.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            for (std::size_t j = i + 1; j < vertices_.size(); ++j)
                if (adjacent(vertices_[i], vertices_[j])) out.emplace_back(vertices_[i], vertices_[j]);
        return out;
    }

    /// Induced subgraph on the current vertices minus `v`.
    UGraph without(Vertex v) const {
        UGraph g = *this;
        g.remove_vertex(v);
        return g;
    }

    void check_member(Vertex v) const {
        if (!contains(v)) throw InvalidArgument("vertex " + std::to_string(v) + " not in graph");
    }

    friend bool operator==(const UGraph& a, const UGraph& b) {
        if (a.n_ != b.n_ || a.member_ != b.member_) return false;
        for (Vertex i : a.vertices_)
            for (Vertex j : a.vertices_)
                if (a.adjacent(i, j) != b.adjacent(i, j)) return false;
        return true;
    }

private:
    static std::vector<Vertex> all_vertices(int n) {
        std::vector<Vertex> vs(n > 0 ? n : 0);
        for (int i = 0; i < n; ++i) vs[i] = i;
        return vs;
    }

    void check_pair(Vertex a, Vertex b) const {
        check_member(a);
        check_member(b);
        detail::require(a != b, "UGraph: self-loop");
    }

    void set(Vertex a, Vertex b, std::uint8_t value) {
        adj_[static_cast<std::size_t>(a) * n_ + b] = value;
        adj_[static_cast<std::size_t>(b) * n_ + a] = value;
    }

    void rebuild_vertex_list() {
        vertices_.clear();
        for (Vertex v = 0; v < n_; ++v)
            if (member_[v]) vertices_.push_back(v);
    }

    int n_ = 0;
    std::vector<std::uint8_t> member_;
    std::vector<std::uint8_t> adj_;
    std::vector<Vertex> vertices_;
};

}  // namespace causal_perm

#endif
