#include "hamcount/frieze.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "hamcount/errors.hpp"

namespace hamcount {

Constants compute_constants(std::uint32_t n) {
    if (n < kMinConstantsN) {
        throw DomainError("compute_constants needs n >= " + std::to_string(kMinConstantsN) +
                          " (log log log n > 0), got " + std::to_string(n));
    }
    const double nd = n;
    const double ln = std::log(nd);
    const double lln = std::log(ln);
    const double llln = std::log(lln);

    Constants c;
    c.n = n;
    c.m0 = static_cast<std::uint64_t>(std::floor(nd * ln - nd * llln));
    c.m1 = static_cast<std::uint64_t>(std::floor(nd * ln + nd * llln));
    c.m3 = static_cast<std::uint64_t>(std::ceil(2.0 / 3.0 * nd * ln));
    c.large_threshold = static_cast<std::uint32_t>(std::ceil(3.0 * ln / lln));
    c.degree_window_eps = 4.0 / lln;
    c.good_loop_cap = lln;
    c.good_cycle_cap = 2.0 * ln;
    c.degree_cap = ln * ln;

    // m0 and m1 coincide at n = 16 (floor of n log n +- 0.31).
    if (!(c.m3 < c.m0 && c.m0 <= c.m1) || (n > kMinConstantsN && c.m0 >= c.m1)) {
        throw std::logic_error("constant ordering m3 < m0 < m1 violated at n = " + std::to_string(n));
    }
    return c;
}

VertexSet compute_large(const Digraph& d, std::uint32_t thr) {
    VertexSet large(d.n());
    for (Vertex v = 0; v < d.n(); ++v) {
        if (d.out_degree(v) >= thr && d.in_degree(v) >= thr) large.insert(v);
    }
    return large;
}

StarDigraph build_d_star(const CoupledProcess& cp, const Constants& c) {
    const EdgeSequence& seq = cp.loopful;
    const std::size_t m_star = hitting_time(seq);
    const std::size_t m3 = std::min<std::size_t>(c.m3, seq.size());

    StarDigraph s;
    s.m_star_loopful = m_star;
    s.base = seq.prefix(m3);
    s.large = compute_large(s.base, c.large_threshold);
    s.graph = s.base;
    for (std::size_t k = m3; k < m_star; ++k) {
        const Edge& e = seq[k];
        if (s.large.contains(e.from) && s.large.contains(e.to)) continue;
        if (s.graph.add_edge(e)) s.extra.push_back(e);
    }
    return s;
}

E1Graph build_e1(const CoupledProcess& cp, const Constants& c, const StarDigraph& star) {
    const EdgeSequence& seq = cp.loopful;
    const std::uint32_t n = seq.n();
    const std::size_t m_star = star.m_star_loopful;
    if (m_star > seq.size()) throw PreconditionError("loopful sequence shorter than m*'");

    E1Graph e1;
    e1.graph = Digraph(n, true);
    std::vector<std::uint32_t> taken(n, 0);
    for (std::size_t k = 0; k < m_star; ++k) {
        const Edge& e = seq[k];
        if (taken[e.from] < c.e1_width) {
            ++taken[e.from];
            e1.graph.add_edge(e);
            e1.plus.push_back(e);
        }
    }
    std::fill(taken.begin(), taken.end(), 0);
    for (std::size_t k = 0; k < m_star; ++k) {
        const Edge& e = seq[k];
        if (taken[e.to] < c.e1_width && !e1.graph.has_edge(e)) {
            ++taken[e.to];
            e1.graph.add_edge(e);
            e1.minus.push_back(e);
        }
    }
    for (const Edge& e : e1.graph.edges()) {
        if (!star.graph.has_edge(e)) e1.outside_d_star.push_back(e);
    }
    return e1;
}

PropertyReport check_properties(const StarDigraph& s, const Constants& c, double c_a) {
    const Digraph& g = s.graph;
    const std::uint32_t n = g.n();
    PropertyReport r;

    // (a)
    r.non_large = n - s.large.size();
    r.non_large_bound = c_a * std::sqrt(static_cast<double>(n));
    r.large_size = static_cast<double>(r.non_large) <= r.non_large_bound;

    // (b): undirected BFS to depth `isolation_distance` from each non-LARGE vertex.
    r.isolated = true;
    std::vector<std::uint32_t> dist(n, ~0u);
    std::vector<Vertex> touched;
    for (Vertex src = 0; src < n && r.isolated; ++src) {
        if (s.large.contains(src)) continue;
        std::queue<Vertex> q;
        q.push(src);
        dist[src] = 0;
        touched.push_back(src);
        while (!q.empty() && r.isolated) {
            const Vertex u = q.front();
            q.pop();
            if (dist[u] == c.isolation_distance) continue;
            auto visit = [&](Vertex w) {
                if (dist[w] != ~0u) return;
                dist[w] = dist[u] + 1;
                touched.push_back(w);
                if (!s.large.contains(w)) {
                    r.isolated = false;
                    r.close_pair = std::make_pair(src, w);
                    r.close_distance = dist[w];
                    return;
                }
                q.push(w);
            };
            for (Vertex w : g.out(u)) {
                visit(w);
                if (!r.isolated) break;
            }
            if (!r.isolated) break;
            for (Vertex w : g.in(u)) {
                visit(w);
                if (!r.isolated) break;
            }
        }
        for (Vertex t : touched) dist[t] = ~0u;
        touched.clear();
    }

    // (c): any loop, 2-cycle or triangle through a non-LARGE vertex.
    r.short_cycles = true;
    for (Vertex v = 0; v < n && r.short_cycles; ++v) {
        if (s.large.contains(v)) continue;
        if (g.has_edge(v, v)) {
            r.short_cycles = false;
            r.bad_cycle = {v};
            break;
        }
        for (Vertex w : g.out(v)) {
            if (w == v) continue;
            if (g.has_edge(w, v)) {
                r.short_cycles = false;
                r.bad_cycle = {v, w};
                break;
            }
            for (Vertex x : g.out(w)) {
                if (x == v || x == w) continue;
                if (g.has_edge(x, v)) {
                    r.short_cycles = false;
                    r.bad_cycle = {v, w, x};
                    break;
                }
            }
            if (!r.short_cycles) break;
        }
    }

    // (d)
    r.degree_bound = true;
    for (Vertex v = 0; v < n; ++v) {
        const std::size_t d = std::max(g.out_degree(v), g.in_degree(v));
        if (d > r.max_degree) r.max_degree = d;
        if (static_cast<double>(d) > c.degree_cap && !r.high_degree_vertex) {
            r.degree_bound = false;
            r.high_degree_vertex = v;
        }
    }
    return r;
}

bool classify_good(const OneFactor& f, const Constants& c) {
    const CycleType t = cycle_type(f);
    return static_cast<double>(t.num_loops) < c.good_loop_cap &&
           static_cast<double>(t.num_cycles) < c.good_cycle_cap;
}

}  // namespace hamcount
