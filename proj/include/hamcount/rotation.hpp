#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hamcount/digraph.hpp"
#include "hamcount/errors.hpp"
#include "hamcount/exact.hpp"

namespace hamcount {

using Cycle = std::vector<Vertex>;

/// Vertex-disjoint set of edges that need not belong to the host digraph.
class VirtualEdgeSet {
public:
    /// Throws PreconditionError if `e` shares a vertex with a stored edge.
    void insert(Edge e);
    bool contains(Edge e) const { return edges_.contains(e); }
    bool touches(Vertex v) const { return used_.contains(v); }
    std::size_t size() const noexcept { return list_.size(); }
    bool empty() const noexcept { return list_.empty(); }
    const std::vector<Edge>& edges() const noexcept { return list_; }
    const EdgeSet& as_set() const noexcept { return edges_; }

private:
    std::vector<Edge> list_;
    EdgeSet edges_;
    std::unordered_set<Vertex> used_;
};

/// Directed path v0 ... vl with a position index.
class PathState {
public:
    static constexpr std::uint32_t kAbsent = ~std::uint32_t{0};

    /// `n` bounds vertex ids. Throws PreconditionError on repeated vertices.
    PathState(std::uint32_t n, std::vector<Vertex> vertices);

    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    std::size_t length() const noexcept { return vertices_.size() - 1; }  ///< l
    Vertex front() const { return vertices_.front(); }
    Vertex back() const { return vertices_.back(); }
    Vertex operator[](std::size_t i) const { return vertices_[i]; }
    std::uint32_t position(Vertex v) const { return pos_[v]; }
    bool contains(Vertex v) const { return pos_[v] != kAbsent; }

    /// Every consecutive pair is an edge of `d` or of `extra`.
    bool edges_valid(const Digraph& d, const EdgeSet& extra = {}) const;

private:
    std::vector<Vertex> vertices_;
    std::vector<std::uint32_t> pos_;
};

/// v0..vi vj..vl v(i+1)..v(j-1), using edges (vi, vj) and (vl, v(i+1)).
/// Requires 1 <= i < j <= l and both edges in `d`; PreconditionError otherwise.
PathState rotate(const PathState& p, std::size_t i, std::size_t j, const Digraph& d);

/// Merges two vertex-disjoint cycles through edges (v1,w1) in c1 and (v2,w2)
/// in c2 such that (v1,w2) and (v2,w1) are edges of `d`. Picks the pair with
/// the smallest (index in c1, index in c2). The merged cycle starts at w1.
std::optional<Cycle> patch_cycles(const Cycle& c1, const Cycle& c2, const Digraph& d);

struct ClosedPath {
    Cycle cycle;               ///< starts at the path's v0
    std::size_t rotations = 0; ///< rotations applied before closing
};

struct CloseOptions {
    std::size_t rotation_budget = 0;  ///< max rotation depth; 0 means ceil(3 log n)
    std::size_t max_states = 4096;    ///< cap on explored paths
};

/// Breadth-first search over rotation sequences (fixing v0) for a path whose
/// endpoint has an allowed edge back to v0. Edges in `forbidden` are never
/// added. Explores each distinct endpoint at most once.
std::optional<ClosedPath> close_path(const PathState& p, const Digraph& d, const EdgeSet& forbidden,
                                     const CloseOptions& opts = {}, std::uint64_t seed = 0);

struct Elimination {
    Cycle cycle;
    std::size_t rounds = 0;
    std::size_t rotations = 0;
    std::size_t edges_changed = 0;  ///< edges of the output not in the input
};

/// Removes edges of `forbidden` from a Hamilton cycle one at a time: drop the
/// edge, then close the resulting Hamilton path by rotations. Each round
/// strictly lowers the number of forbidden edges; nullopt if a round fails.
std::optional<Elimination> eliminate_forbidden(const Cycle& h, const EdgeSet& forbidden,
                                               const Digraph& d, const CloseOptions& opts = {},
                                               std::uint64_t seed = 0);

class MergeError : public std::runtime_error {
public:
    MergeError(const std::string& what, Vertex v) : std::runtime_error(what), vertex(v) {}
    Vertex vertex;
};

struct MergedFactor {
    OneFactor factor;
    VirtualEdgeSet virtual_edges;
    std::vector<Vertex> merged;  ///< former loop vertices, in merge order
};

/// Inserts every loop vertex v of `f` into another cycle C = v0 v1 ...: via an
/// edge (v0, v) of `d`, replacing (v0, v1) by (v0, v), (v, v1); or, failing
/// that, via an edge (v, v0), replacing (u, v0) by (u, v), (v, v0) where u
/// precedes v0. The second new edge is recorded as virtual when absent from
/// `d`. Vertices used by earlier merges are avoided; merges that would create a
/// cycle of length <= 3 with a vertex outside `large` are skipped.
/// PreconditionError if a loop vertex lies outside `large`; MergeError if no
/// admissible merge exists for some loop.
MergedFactor merge_loops(const OneFactor& f, const Digraph& d, const VertexSet& large,
                         std::uint64_t seed = 0);

/// Contraction of each v outside L, with v- v v+ consecutive on its cycle of
/// M, into one vertex taking the in-neighbours of v- and out-neighbours of v+.
struct Compression {
    Digraph graph;
    OneFactor factor;
    std::vector<std::vector<Vertex>> groups;  ///< compressed id -> originals in path order
    std::vector<Vertex> to_compressed;         ///< original -> compressed id
    std::uint32_t original_n = 0;

    Vertex in_rep(Vertex c) const { return groups[c].front(); }
    Vertex out_rep(Vertex c) const { return groups[c].back(); }
};

class CompressionError : public PreconditionError {
public:
    CompressionError(const std::string& what, std::vector<Vertex> vs)
        : PreconditionError(what), vertices(std::move(vs)) {}
    std::vector<Vertex> vertices;
};

/// Throws CompressionError if two vertices outside L lie within distance 10
/// on M or a vertex outside L lies on an M-cycle of length <= 3.
Compression compress(const Digraph& d, const OneFactor& m, const VertexSet& l);

/// Expands a cycle of the compressed instance to the original vertex ids.
Cycle decompress(const Compression& c, const Cycle& compressed);

/// Maps an original cycle that traverses every group contiguously back to
/// compressed ids. Throws PreconditionError otherwise.
Cycle recompress(const Compression& c, const Cycle& original);

/// Number of edges of `b` (as a cyclic sequence) that are not edges of `a`.
std::size_t cycle_edge_difference(const Cycle& a, const Cycle& b);

/// Independent check: `c` visits each of the n vertices once and every
/// consecutive pair, including the wrap-around, is an edge of `d`.
bool is_hamilton_cycle(const Digraph& d, const Cycle& c);

}  // namespace hamcount
