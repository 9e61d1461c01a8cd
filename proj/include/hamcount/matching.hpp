#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hamcount/digraph.hpp"
#include "hamcount/exact.hpp"

namespace hamcount {

/// Maximum matching of the bipartite double cover of a digraph: left copy of
/// v joined to right copy of w for each edge (v, w). Hopcroft-Karp; the seed
/// permutes adjacency lists and the left-vertex order, so different seeds can
/// return different maximum matchings.
class BipartiteMatcher {
public:
    static constexpr Vertex kFree = ~Vertex{0};

    BipartiteMatcher(const Digraph& d, std::uint64_t seed);

    /// Runs to completion and returns the matching size.
    std::size_t solve();

    /// mate_left()[v] is the right vertex matched to left v, or kFree.
    const std::vector<Vertex>& mate_left() const noexcept { return mate_left_; }

private:
    bool bfs();
    bool dfs(Vertex u);

    std::uint32_t n_;
    std::vector<std::vector<Vertex>> adj_;
    std::vector<Vertex> order_;
    std::vector<Vertex> mate_left_;
    std::vector<Vertex> mate_right_;
    std::vector<std::uint32_t> level_;
    std::vector<std::size_t> cursor_;
};

/// A 1-factor of `d` (perfect matching of the double cover) if one exists.
std::optional<OneFactor> find_one_factor(const Digraph& d, std::uint64_t seed = 0);

}  // namespace hamcount
