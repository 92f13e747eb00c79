#ifndef CAUSAL_PERM_CORE_HPP
#define CAUSAL_PERM_CORE_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace causal_perm {

/// Dense 0-based vertex id. User-facing I/O is 1-based.
using Vertex = int;

/// Undirected edge stored with `u < v`.
struct Edge {
    Vertex u{};
    Vertex v{};

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a marginal precision has a non-positive pivot.
class DegenerateMarginal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the sample size is too small for the requested test.
class InsufficientSamples : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by cooperative cancellation in long-running searches.
class Timeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidArgument(what);
}

// splitmix64 finalizer; used for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Seed for replicate `index` of a run with master seed `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return detail::mix64(master ^ detail::mix64(index + 1));
}

}  // namespace causal_perm

#endif
