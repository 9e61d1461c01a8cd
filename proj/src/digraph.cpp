#include "hamcount/digraph.hpp"

#include <algorithm>
#include <limits>

#include "hamcount/errors.hpp"
#include "hamcount/rng.hpp"

namespace hamcount {

Digraph::Digraph(std::uint32_t n, bool allow_loops)
    : n_(n), allow_loops_(allow_loops), out_(n), in_(n) {}

Digraph::Digraph(std::uint32_t n, bool allow_loops, std::span<const Edge> edges)
    : Digraph(n, allow_loops) {
    edges_.reserve(edges.size());
    set_.reserve(edges.size());
    for (const Edge& e : edges) add_edge(e);
}

bool Digraph::add_edge(Vertex u, Vertex v) {
    if (u >= n_ || v >= n_) {
        throw DomainError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") out of range for n = " + std::to_string(n_));
    }
    if (u == v && !allow_loops_) {
        throw DomainError("loop at " + std::to_string(u) + " in a loopless digraph");
    }
    if (!set_.insert(Edge{u, v}).second) return false;
    edges_.push_back(Edge{u, v});
    out_[u].push_back(v);
    in_[v].push_back(u);
    return true;
}

std::string Digraph::audit() const {
    if (out_.size() != n_ || in_.size() != n_) return "adjacency arrays sized incorrectly";
    if (set_.size() != edges_.size()) return "duplicate edge in edge list";
    std::size_t out_total = 0;
    std::size_t in_total = 0;
    for (Vertex v = 0; v < n_; ++v) {
        for (Vertex w : out_[v]) {
            if (!set_.contains(Edge{v, w})) {
                return "out-adjacency of " + std::to_string(v) + " lists missing edge";
            }
        }
        for (Vertex u : in_[v]) {
            if (!set_.contains(Edge{u, v})) {
                return "in-adjacency of " + std::to_string(v) + " lists missing edge";
            }
        }
        out_total += out_[v].size();
        in_total += in_[v].size();
    }
    if (out_total != edges_.size() || in_total != edges_.size()) {
        return "adjacency totals disagree with edge count";
    }
    for (const Edge& e : edges_) {
        if (e.from >= n_ || e.to >= n_) return "edge endpoint out of range";
        if (e.is_loop() && !allow_loops_) return "loop in loopless digraph";
    }
    return {};
}

Digraph Digraph::without_loops() const {
    Digraph out(n_, false);
    for (const Edge& e : edges_) {
        if (!e.is_loop()) out.add_edge(e);
    }
    return out;
}

MinDegrees min_degrees(const Digraph& d) {
    if (d.n() == 0) return {};
    MinDegrees m{std::numeric_limits<std::size_t>::max(), std::numeric_limits<std::size_t>::max()};
    for (Vertex v = 0; v < d.n(); ++v) {
        m.out = std::min(m.out, d.out_degree(v));
        m.in = std::min(m.in, d.in_degree(v));
    }
    return m;
}

Digraph gen_binomial(std::uint32_t n, double p, bool allow_loops, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("edge probability must lie in [0, 1], got " + std::to_string(p));
    }
    Rng rng(seed);
    Digraph d(n, allow_loops);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = 0; v < n; ++v) {
            if (u == v && !allow_loops) continue;
            if (rng.bernoulli(p)) d.add_edge(u, v);
        }
    }
    return d;
}

Digraph complete_digraph(std::uint32_t n, bool with_loops) {
    Digraph d(n, with_loops);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = 0; v < n; ++v) {
            if (u != v || with_loops) d.add_edge(u, v);
        }
    }
    return d;
}

}  // namespace hamcount
