#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamcount/digraph.hpp"
#include "hamcount/exact.hpp"
#include "hamcount/process.hpp"

namespace hamcount {

/// Edge-count milestones and thresholds of the existence argument for n
/// vertices. All logarithms natural.
struct Constants {
    std::uint32_t n = 0;
    std::uint64_t m0 = 0;  ///< floor(n log n - n log log log n)
    std::uint64_t m1 = 0;  ///< floor(n log n + n log log log n)
    std::uint64_t m3 = 0;  ///< ceil(2/3 n log n)
    std::uint32_t large_threshold = 0;  ///< ceil(3 log n / log log n)
    std::uint32_t e1_width = 10;
    std::uint32_t isolation_distance = 10;
    std::uint32_t short_cycle_len = 3;
    double degree_window_eps = 0;  ///< 4 / log log n
    double good_loop_cap = 0;      ///< log log n
    double good_cycle_cap = 0;     ///< 2 log n
    double degree_cap = 0;         ///< log^2 n
};

inline constexpr std::uint32_t kMinConstantsN = 16;

/// Throws DomainError for n < 16 (log log log n must be positive).
Constants compute_constants(std::uint32_t n);

/// Vertices whose out-degree and in-degree are both >= thr.
VertexSet compute_large(const Digraph& d, std::uint32_t thr);

/// D'_{m3} plus every edge of D'_{m*'} touching a vertex outside LARGE.
struct StarDigraph {
    Digraph base;             ///< D'_{m3}
    std::vector<Edge> extra;  ///< added edges, disjoint from base, arrival order
    VertexSet large;
    std::size_t m_star_loopful = 0;
    Digraph graph;            ///< base plus extra (loops allowed)
};

StarDigraph build_d_star(const CoupledProcess& cp, const Constants& c);

/// First `e1_width` out-edges of each vertex (E1+), then the first `e1_width`
/// in-edges of each vertex among the remaining edges (E1-), scanning the
/// loopful order up to m*'.
struct E1Graph {
    Digraph graph;
    std::vector<Edge> plus;
    std::vector<Edge> minus;
    /// Edges of E1 absent from D_*'. Empty whenever the containment holds;
    /// it can fail at small n, where LARGE vertices may need in-edges past m3.
    std::vector<Edge> outside_d_star;
};

E1Graph build_e1(const CoupledProcess& cp, const Constants& c, const StarDigraph& star);

struct PropertyReport {
    bool large_size = false;        ///< (a) n - |LARGE| <= C_a sqrt(n)
    bool isolated = false;          ///< (b) no two non-LARGE within distance 10
    bool short_cycles = false;      ///< (c) cycles of length <= 3 inside LARGE
    bool degree_bound = false;      ///< (d) every in/out-degree <= log^2 n

    std::size_t non_large = 0;
    double non_large_bound = 0;
    std::optional<std::pair<Vertex, Vertex>> close_pair;
    std::uint32_t close_distance = 0;
    std::vector<Vertex> bad_cycle;
    std::optional<Vertex> high_degree_vertex;
    std::size_t max_degree = 0;

    bool all() const noexcept { return large_size && isolated && short_cycles && degree_bound; }
};

PropertyReport check_properties(const StarDigraph& s, const Constants& c, double c_a = 10.0);

/// Fewer than log log n loops and fewer than 2 log n cycles.
bool classify_good(const OneFactor& f, const Constants& c);

}  // namespace hamcount
