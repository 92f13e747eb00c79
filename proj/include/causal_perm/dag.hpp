#ifndef CAUSAL_PERM_DAG_HPP
#define CAUSAL_PERM_DAG_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "core.hpp"

namespace causal_perm {

/// Directed arc `from -> to`, optionally weighted.
struct Arc {
    Vertex from{};
    Vertex to{};
    std::optional<double> weight{};

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed acyclic graph over vertices 0..p-1.
///
/// Acyclicity, id validity and weight consistency are checked on
/// construction; a Dag is immutable afterwards.
class Dag {
public:
    Dag() = default;

    explicit Dag(int p) : Dag(p, {}) {}

    Dag(int p, std::vector<Arc> arcs) : p_(p), parents_(p), children_(p) {
        detail::require(p >= 0, "Dag: negative vertex count");
        std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
            return std::pair(a.from, a.to) < std::pair(b.from, b.to);
        });
        if (!arcs.empty()) weighted_ = arcs.front().weight.has_value();
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            const Arc& a = arcs[i];
            detail::require(a.from >= 0 && a.from < p && a.to >= 0 && a.to < p,
                            "Dag: arc references invalid vertex id");
            detail::require(a.from != a.to, "Dag: self-loop");
            detail::require(i == 0 || arcs[i - 1].from != a.from || arcs[i - 1].to != a.to,
                            "Dag: duplicate arc");
            detail::require(a.weight.has_value() == weighted_,
                            "Dag: weights must be given for all arcs or none");
            if (a.weight) {
                detail::require(std::isfinite(*a.weight) && *a.weight != 0.0,
                                "Dag: arc weight must be finite and nonzero");
            }
            parents_[a.to].push_back(a.from);
            children_[a.from].push_back(a.to);
        }
        for (auto& ps : parents_) std::sort(ps.begin(), ps.end());
        arcs_ = std::move(arcs);
        topo_ = kahn_order();
        detail::require(static_cast<int>(topo_.size()) == p_, "Dag: graph has a cycle");
    }

    int size() const { return p_; }
    std::size_t num_arcs() const { return arcs_.size(); }
    bool weighted() const { return weighted_; }

    /// Arcs sorted lexicographically by (from, to).
    const std::vector<Arc>& arcs() const { return arcs_; }
    const std::vector<Vertex>& parents(Vertex v) const { return parents_.at(v); }
    const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }
    const std::vector<Vertex>& topological_order() const { return topo_; }

    bool has_arc(Vertex from, Vertex to) const {
        const auto& ps = parents_.at(to);
        return std::binary_search(ps.begin(), ps.end(), from);
    }

    std::optional<double> weight(Vertex from, Vertex to) const {
        auto it = std::lower_bound(arcs_.begin(), arcs_.end(), std::pair(from, to),
                                   [](const Arc& a, const std::pair<Vertex, Vertex>& k) {
                                       return std::pair(a.from, a.to) < k;
                                   });
        if (it == arcs_.end() || it->from != from || it->to != to) return std::nullopt;
        return it->weight;
    }

    /// Proper descendants of `v` as a membership mask.
    std::vector<char> descendants(Vertex v) const {
        check_vertex(v);
        std::vector<char> seen(p_, 0);
        std::vector<Vertex> stack(children_[v].begin(), children_[v].end());
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            if (seen[u]) continue;
            seen[u] = 1;
            for (Vertex c : children_[u]) stack.push_back(c);
        }
        return seen;
    }

    void check_vertex(Vertex v) const {
        if (v < 0 || v >= p_) {
            throw InvalidArgument("invalid vertex id " + std::to_string(v));
        }
    }

    /// Same structure without weights.
    Dag skeleton_copy() const {
        std::vector<Arc> plain;
        plain.reserve(arcs_.size());
        for (const Arc& a : arcs_) plain.push_back({a.from, a.to, std::nullopt});
        return Dag(p_, std::move(plain));
    }

    friend bool operator==(const Dag& a, const Dag& b) {
        return a.p_ == b.p_ && a.arcs_ == b.arcs_;
    }

private:
    std::vector<Vertex> kahn_order() const {
        std::vector<int> indeg(p_, 0);
        for (Vertex v = 0; v < p_; ++v) indeg[v] = static_cast<int>(parents_[v].size());
        std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
        for (Vertex v = 0; v < p_; ++v)
            if (indeg[v] == 0) ready.push(v);
        std::vector<Vertex> order;
        order.reserve(p_);
        while (!ready.empty()) {
            Vertex v = ready.top();
            ready.pop();
            order.push_back(v);
            for (Vertex c : children_[v])
                if (--indeg[c] == 0) ready.push(c);
        }
        return order;
    }

    int p_ = 0;
    bool weighted_ = false;
    std::vector<Arc> arcs_;
    std::vector<std::vector<Vertex>> parents_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<Vertex> topo_;
};

}  // namespace causal_perm

#endif
