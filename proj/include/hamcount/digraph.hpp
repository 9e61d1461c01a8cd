#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace hamcount {

using Vertex = std::uint32_t;

struct Edge {
    Vertex from = 0;
    Vertex to = 0;

    bool is_loop() const noexcept { return from == to; }
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
    std::size_t operator()(const Edge& e) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.from) << 32) | e.to);
    }
};

using EdgeSet = std::unordered_set<Edge, EdgeHash>;

/// Directed graph on vertices [0, n), with or without loops.
///
/// Edges keep their insertion order (for process prefixes this is the arrival
/// order). Out- and in-adjacency lists mirror the edge list; `audit()` checks
/// that they do. A loop contributes one to both the in- and out-degree of its
/// vertex.
class Digraph {
public:
    Digraph() = default;
    Digraph(std::uint32_t n, bool allow_loops);
    Digraph(std::uint32_t n, bool allow_loops, std::span<const Edge> edges);

    /// Inserts (u, v). Returns false if already present. Throws DomainError for
    /// out-of-range endpoints or a loop when loops are not allowed.
    bool add_edge(Vertex u, Vertex v);
    bool add_edge(Edge e) { return add_edge(e.from, e.to); }

    std::uint32_t n() const noexcept { return n_; }
    bool allow_loops() const noexcept { return allow_loops_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    bool has_edge(Vertex u, Vertex v) const { return set_.contains(Edge{u, v}); }
    bool has_edge(Edge e) const { return set_.contains(e); }

    const std::vector<Vertex>& out(Vertex v) const { return out_[v]; }
    const std::vector<Vertex>& in(Vertex v) const { return in_[v]; }
    std::size_t out_degree(Vertex v) const { return out_[v].size(); }
    std::size_t in_degree(Vertex v) const { return in_[v].size(); }

    /// Verifies that the adjacency indices agree with the edge set and that
    /// the loop/duplicate invariants hold. Returns an empty string when
    /// consistent, else a description of the first inconsistency.
    std::string audit() const;

    /// Same vertex set with every loop dropped; result disallows loops.
    Digraph without_loops() const;

private:
    std::uint32_t n_ = 0;
    bool allow_loops_ = false;
    std::vector<Edge> edges_;
    EdgeSet set_;
    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
};

/// Membership set over [0, n).
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::uint32_t n, bool full = false)
        : member_(n, full ? 1 : 0), count_(full ? n : 0) {}

    std::uint32_t universe() const noexcept { return static_cast<std::uint32_t>(member_.size()); }
    std::size_t size() const noexcept { return count_; }
    bool contains(Vertex v) const { return member_[v] != 0; }

    void insert(Vertex v) {
        if (member_[v] == 0) {
            member_[v] = 1;
            ++count_;
        }
    }
    void erase(Vertex v) {
        if (member_[v] != 0) {
            member_[v] = 0;
            --count_;
        }
    }

    std::vector<Vertex> members() const {
        std::vector<Vertex> out;
        out.reserve(count_);
        for (Vertex v = 0; v < member_.size(); ++v) {
            if (member_[v] != 0) out.push_back(v);
        }
        return out;
    }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

private:
    std::vector<unsigned char> member_;
    std::size_t count_ = 0;
};

struct MinDegrees {
    std::size_t out = 0;
    std::size_t in = 0;
    friend bool operator==(const MinDegrees&, const MinDegrees&) = default;
};

MinDegrees min_degrees(const Digraph& d);

/// Each admissible pair present independently with probability p.
/// Throws DomainError unless 0 <= p <= 1.
Digraph gen_binomial(std::uint32_t n, double p, bool allow_loops, std::uint64_t seed);

Digraph complete_digraph(std::uint32_t n, bool with_loops);

}  // namespace hamcount
