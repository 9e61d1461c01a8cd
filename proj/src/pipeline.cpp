#include "hamcount/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "hamcount/analysis.hpp"
#include "hamcount/errors.hpp"
#include "hamcount/matching.hpp"
#include "hamcount/rng.hpp"

namespace hamcount {
namespace {

using nlohmann::json;

class PhaseClock {
public:
    PhaseClock(json& log, bool enabled) : log_(log), enabled_(enabled) {}

    void start() { t0_ = std::chrono::steady_clock::now(); }
    void stop(const char* phase) {
        if (!enabled_) return;
        const auto dt = std::chrono::steady_clock::now() - t0_;
        log_["timings_ms"][phase] = std::chrono::duration<double, std::milli>(dt).count();
    }

private:
    json& log_;
    bool enabled_;
    std::chrono::steady_clock::time_point t0_;
};

// v lies on an M-cycle of length >= 4 and no chosen vertex is within `dist` steps.
bool spaced(const OneFactor& m, const std::vector<Vertex>& pred, Vertex v, const std::vector<unsigned char>& chosen,
            std::uint32_t dist) {
    Vertex w = v;
    for (int k = 0; k < 3; ++k) {
        w = m[w];
        if (w == v) return false;
    }
    Vertex f = v;
    Vertex b = v;
    for (std::uint32_t k = 0; k < dist; ++k) {
        f = m[f];
        b = pred[b];
        if (chosen[f] || chosen[b]) return false;
    }
    return true;
}

// Path around cycle(x) from succ(x) to x, then around cycle(y) from y to pred(y).
std::vector<Vertex> join_path(const Cycle& cx, std::size_t ix, const Cycle& cy, std::size_t iy) {
    std::vector<Vertex> p;
    p.reserve(cx.size() + cy.size());
    for (std::size_t k = 1; k <= cx.size(); ++k) p.push_back(cx[(ix + k) % cx.size()]);
    for (std::size_t k = 0; k < cy.size(); ++k) p.push_back(cy[(iy + k) % cy.size()]);
    return p;
}

}  // namespace

HamiltonResult find_hamilton(const CoupledProcess& cp, const Constants& c, std::uint64_t seed,
                             const PipelineOptions& opts) {
    HamiltonResult r;
    json& log = r.log;
    PhaseClock clock(log, opts.record_timings);
    auto fail = [&](const std::string& phase, const std::string& reason) {
        r.success = false;
        r.phase = phase;
        r.reason = reason;
        log["failure"] = {{"phase", phase}, {"reason", reason}};
        return r;
    };

    const std::uint32_t n = c.n;
    const double ln = std::log(static_cast<double>(n));
    r.overlap_bound = n - opts.c_h * ln * ln;

    // Host and auxiliary digraphs.
    clock.start();
    const std::size_t m_star = hitting_time(cp.loopless);
    const Digraph host = cp.loopless.prefix(m_star);
    const StarDigraph star = build_d_star(cp, c);
    const E1Graph e1 = build_e1(cp, c, star);
    log["m_star"] = m_star;
    log["m_star_loopful"] = star.m_star_loopful;
    log["large"] = star.large.size();
    log["d_star_edges"] = star.graph.num_edges();
    log["e1_edges"] = e1.graph.num_edges();
    log["e1_outside_d_star"] = e1.outside_d_star.size();
    clock.stop("setup");

    // A good 1-factor: relabel the in-side uniformly, match, map back.
    clock.start();
    Rng rng(derive_seed(seed, 0));
    std::optional<OneFactor> factor;
    std::string source;
    std::size_t attempts = 0;
    while (attempts < opts.relabel_retries && !factor) {
        ++attempts;
        const auto sigma = rng.permutation(n);
        const std::uint64_t mseed = rng.next();
        auto f = find_one_factor(relabel(e1.graph, sigma), mseed);
        source = "e1";
        if (!f) {
            f = find_one_factor(relabel(star.graph, sigma), mseed);
            source = "d_star";
        }
        if (!f) return fail("factor", "no 1-factor in E1 or D_*'");
        OneFactor g = relabel_factor(*f, inverse_permutation(sigma));
        if (classify_good(g, c)) factor = std::move(g);
    }
    log["relabel_attempts"] = attempts;
    clock.stop("factor");
    if (!factor) return fail("relabel", "no good 1-factor in " + std::to_string(attempts) + " attempts");
    const OneFactor& m0 = *factor;
    const CycleType t0 = cycle_type(m0);
    log["factor_source"] = source;
    log["initial_loops"] = t0.num_loops;
    log["initial_cycles"] = t0.num_cycles;

    // Edges of the factor that the final cycle must not keep.
    EdgeSet forbidden;
    for (const Edge& e : m0.edges()) {
        if (!e.is_loop() && !host.has_edge(e)) forbidden.insert(e);
    }
    log["foreign_edges"] = forbidden.size();

    // Loop merging; every vertex counts as LARGE here since the host carries
    // loops only through the factor.
    clock.start();
    std::optional<MergedFactor> merged;
    std::string merge_reason;
    for (std::size_t k = 0; k < opts.merge_retries && !merged; ++k) {
        try {
            merged = merge_loops(m0, host, VertexSet(n, true), derive_seed(seed, 100 + k));
        } catch (const MergeError& e) {
            merge_reason = e.what();
        }
    }
    clock.stop("merge");
    if (!merged) return fail("merge", merge_reason);
    for (const Edge& e : merged->virtual_edges.edges()) forbidden.insert(e);
    log["virtual_edges"] = merged->virtual_edges.size();
    const OneFactor& mv = merged->factor;

    // Compression of well-spaced low-degree vertices.
    clock.start();
    std::vector<Vertex> pred(n);
    for (Vertex v = 0; v < n; ++v) pred[mv[v]] = v;
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0u);
    auto low = [&](Vertex v) { return std::min(host.in_degree(v), host.out_degree(v)); };
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return low(a) < low(b); });
    std::vector<unsigned char> chosen(n, 0);
    VertexSet keep(n, true);
    for (Vertex v : order) {
        if (low(v) > opts.compress_degree) break;
        if (star.large.contains(v)) continue;
        const Edge ein{pred[v], v};
        const Edge eout{v, mv[v]};
        if (!host.has_edge(ein) || !host.has_edge(eout) || forbidden.contains(ein) || forbidden.contains(eout)) {
            continue;
        }
        if (!spaced(mv, pred, v, chosen, c.isolation_distance)) continue;
        chosen[v] = 1;
        keep.erase(v);
    }
    log["compressed_vertices"] = n - keep.size();

    Digraph patch_graph = host;
    Digraph rotate_graph = host;
    if (opts.edge_mode == EdgeMode::kReserved) {
        patch_graph = Digraph(n, false);
        rotate_graph = Digraph(n, false);
        std::size_t reserved = 0;
        for (std::size_t k = 0; k < m_star; ++k) {
            const Edge& e = cp.loopless[k];
            if (k >= c.m3 && star.large.contains(e.from) && star.large.contains(e.to)) {
                (reserved++ % 2 == 0 ? patch_graph : rotate_graph).add_edge(e);
            } else {
                patch_graph.add_edge(e);
                rotate_graph.add_edge(e);
            }
        }
        log["reserved_edges"] = reserved;
    }
    log["edge_mode"] = opts.edge_mode == EdgeMode::kReserved ? "reserved" : "full";

    std::optional<Compression> cz;
    std::optional<Compression> cz_rot;
    try {
        cz = compress(patch_graph, mv, keep);
        cz_rot = compress(rotate_graph, mv, keep);
    } catch (const CompressionError& e) {
        return fail("compress", e.what());
    }
    EdgeSet forbidden_c;
    for (const Edge& e : forbidden) {
        const Vertex a = cz->to_compressed[e.from];
        const Vertex b = cz->to_compressed[e.to];
        if (cz->out_rep(a) != e.from || cz->in_rep(b) != e.to) {
            throw std::logic_error("forbidden edge inside a compressed group");
        }
        forbidden_c.insert(Edge{a, b});
    }
    clock.stop("compress");

    // Phase 2: greedy patching.
    clock.start();
    std::vector<Cycle> cycles = cz->factor.cycles();
    log["cycles_before_patching"] = cycles.size();
    std::size_t patches = 0;
    for (bool progress = true; progress && cycles.size() > 1;) {
        progress = false;
        for (std::size_t i = 0; i < cycles.size() && !progress; ++i) {
            for (std::size_t j = i + 1; j < cycles.size() && !progress; ++j) {
                if (auto m = patch_cycles(cycles[i], cycles[j], cz->graph)) {
                    cycles[i] = std::move(*m);
                    cycles.erase(cycles.begin() + static_cast<std::ptrdiff_t>(j));
                    ++patches;
                    progress = true;
                }
            }
        }
    }
    log["patches"] = patches;
    log["cycles_after_patching"] = cycles.size();
    clock.stop("patch");

    // Phase 3: fold every remaining cycle into the longest one by rotations.
    clock.start();
    const Digraph& gr = cz_rot->graph;
    std::size_t merges = 0;
    std::size_t merge_rotations = 0;
    Rng mrng(derive_seed(seed, 1));
    while (cycles.size() > 1) {
        std::size_t a = 0;
        for (std::size_t k = 1; k < cycles.size(); ++k) {
            if (cycles[k].size() > cycles[a].size()) a = k;
        }
        bool done = false;
        for (std::size_t b = 0; b < cycles.size() && !done; ++b) {
            if (b == a) continue;
            struct Link {
                bool from_a;
                std::size_t ix, iy;
            };
            std::vector<Link> links;
            std::unordered_map<Vertex, std::size_t> pos_a, pos_b;
            for (std::size_t k = 0; k < cycles[a].size(); ++k) pos_a.emplace(cycles[a][k], k);
            for (std::size_t k = 0; k < cycles[b].size(); ++k) pos_b.emplace(cycles[b][k], k);
            for (std::size_t k = 0; k < cycles[a].size(); ++k) {
                for (Vertex y : gr.out(cycles[a][k])) {
                    if (auto it = pos_b.find(y); it != pos_b.end() && !forbidden_c.contains({cycles[a][k], y})) {
                        links.push_back({true, k, it->second});
                    }
                }
            }
            for (std::size_t k = 0; k < cycles[b].size(); ++k) {
                for (Vertex y : gr.out(cycles[b][k])) {
                    if (auto it = pos_a.find(y); it != pos_a.end() && !forbidden_c.contains({cycles[b][k], y})) {
                        links.push_back({false, k, it->second});
                    }
                }
            }
            mrng.shuffle(links);
            const std::size_t tries = std::min(links.size(), opts.merge_retries);
            for (std::size_t t = 0; t < tries && !done; ++t) {
                const Link& l = links[t];
                const Cycle& cx = l.from_a ? cycles[a] : cycles[b];
                const Cycle& cy = l.from_a ? cycles[b] : cycles[a];
                PathState p(gr.n(), join_path(cx, l.ix, cy, l.iy));
                if (auto closed = close_path(p, gr, forbidden_c, opts.close, mrng.next())) {
                    cycles[a] = std::move(closed->cycle);
                    cycles.erase(cycles.begin() + static_cast<std::ptrdiff_t>(b));
                    ++merges;
                    merge_rotations += closed->rotations;
                    done = true;
                }
            }
        }
        if (!done) {
            log["merges"] = merges;
            log["merge_rotations"] = merge_rotations;
            clock.stop("rotate");
            return fail("rotate", "no rotation sequence closes a merge of the longest cycle with " +
                                      std::to_string(cycles.size() - 1) + " remaining cycles");
        }
    }
    log["merges"] = merges;
    log["merge_rotations"] = merge_rotations;
    clock.stop("rotate");

    // Forbidden-edge elimination over the rotation edges plus the current cycle.
    clock.start();
    Digraph elim_graph = gr;
    const Cycle& hc = cycles.front();
    for (std::size_t k = 0; k < hc.size(); ++k) {
        const Edge e{hc[k], hc[(k + 1) % hc.size()]};
        if (!forbidden_c.contains(e) && !elim_graph.has_edge(e)) elim_graph.add_edge(e);
    }
    std::size_t on_cycle = 0;
    for (std::size_t k = 0; k < hc.size(); ++k) on_cycle += forbidden_c.contains({hc[k], hc[(k + 1) % hc.size()]});
    log["forbidden_on_cycle"] = on_cycle;
    auto elim = eliminate_forbidden(hc, forbidden_c, elim_graph, opts.close, derive_seed(seed, 2));
    clock.stop("eliminate");
    if (!elim) return fail("eliminate", "could not rotate away every forbidden edge");
    log["elimination_rounds"] = elim->rounds;
    log["elimination_rotations"] = elim->rotations;

    clock.start();
    r.cycle = decompress(*cz, elim->cycle);
    if (!is_hamilton_cycle(host, r.cycle)) {
        clock.stop("verify");
        return fail("verify", "decompressed cycle is not a Hamilton cycle of D_{m*}");
    }
    std::size_t overlap = 0;
    for (std::size_t k = 0; k < r.cycle.size(); ++k) {
        overlap += m0[r.cycle[k]] == r.cycle[(k + 1) % r.cycle.size()];
    }
    r.overlap = overlap;
    log["overlap"] = overlap;
    log["overlap_bound"] = r.overlap_bound;
    clock.stop("verify");
    if (static_cast<double>(overlap) < r.overlap_bound) {
        return fail("overlap", "overlap " + std::to_string(overlap) + " below n - c_h log^2 n");
    }
    r.success = true;
    return r;
}

HamiltonResult run_pipeline(std::uint32_t n, std::uint64_t seed, const PipelineOptions& opts) {
    const Constants c = compute_constants(n);
    const CoupledProcess cp = sample_coupled_until_hitting(n, seed);
    return find_hamilton(cp, c, derive_seed(seed, 1), opts);
}

}  // namespace hamcount
