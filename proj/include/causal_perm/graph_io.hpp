#ifndef CAUSAL_PERM_GRAPH_IO_HPP
#define CAUSAL_PERM_GRAPH_IO_HPP

#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dag.hpp"
#include "permutation.hpp"
#include "ugraph.hpp"

// Text formats. All ids are 1-based on disk.
//
//   DAG:     "p m" then m lines "i j [w]"
//   UGraph:  "p m" then m lines "i j"
//   Permutation: one line of space-separated ids
//
// Edges are written in lexicographic order.

namespace causal_perm::io {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> content_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        lines.push_back(line);
    }
    return lines;
}

inline std::pair<int, int> read_header(const std::vector<std::string>& lines) {
    if (lines.empty()) throw ParseError("missing header line 'p m'");
    std::istringstream hs(lines[0]);
    long p = -1, m = -1;
    if (!(hs >> p >> m) || p < 0 || m < 0) throw ParseError("bad header line: " + lines[0]);
    if (static_cast<long>(lines.size()) - 1 != m)
        throw ParseError("header declares " + std::to_string(m) + " edges, found " +
                         std::to_string(lines.size() - 1));
    return {static_cast<int>(p), static_cast<int>(m)};
}

inline std::string format_weight(double w) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << w;
    return os.str();
}

}  // namespace detail

inline Dag read_dag(std::istream& in) {
    const auto lines = detail::content_lines(in);
    const auto [p, m] = detail::read_header(lines);
    std::vector<Arc> arcs;
    arcs.reserve(m);
    for (int e = 0; e < m; ++e) {
        std::istringstream ls(lines[e + 1]);
        long i = 0, j = 0;
        if (!(ls >> i >> j)) throw ParseError("bad arc line: " + lines[e + 1]);
        if (i < 1 || i > p || j < 1 || j > p) throw ParseError("arc id out of range: " + lines[e + 1]);
        Arc arc{static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1), std::nullopt};
        double w = 0.0;
        if (ls >> w) arc.weight = w;
        arcs.push_back(arc);
    }
    try {
        return Dag(p, std::move(arcs));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

inline void write_dag(std::ostream& out, const Dag& dag) {
    out << dag.size() << ' ' << dag.num_arcs() << '\n';
    for (const Arc& a : dag.arcs()) {
        out << a.from + 1 << ' ' << a.to + 1;
        if (a.weight) out << ' ' << detail::format_weight(*a.weight);
        out << '\n';
    }
}

inline UGraph read_ugraph(std::istream& in) {
    const auto lines = detail::content_lines(in);
    const auto [p, m] = detail::read_header(lines);
    UGraph g(p);
    for (int e = 0; e < m; ++e) {
        std::istringstream ls(lines[e + 1]);
        long i = 0, j = 0;
        if (!(ls >> i >> j) || i < 1 || i > p || j < 1 || j > p || i == j)
            throw ParseError("bad edge line: " + lines[e + 1]);
        g.add_edge(static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1));
    }
    return g;
}

inline void write_ugraph(std::ostream& out, const UGraph& g) {
    const auto edges = g.edges();
    out << g.capacity() << ' ' << edges.size() << '\n';
    for (const Edge& e : edges) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

inline Permutation read_permutation(std::istream& in, int p) {
    std::vector<Vertex> order;
    for (const auto& line : detail::content_lines(in)) {
        std::istringstream ls(line);
        long v = 0;
        while (ls >> v) order.push_back(static_cast<Vertex>(v - 1));
        if (!ls.eof()) throw ParseError("bad permutation token in: " + line);
    }
    try {
        return Permutation(std::move(order), p);
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

inline void write_permutation(std::ostream& out, const Permutation& perm) {
    for (std::size_t i = 0; i < perm.size(); ++i) out << (i ? " " : "") << perm[i] + 1;
    out << '\n';
}

}  // namespace causal_perm::io

#endif
