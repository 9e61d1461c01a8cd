#pragma once

// Randomized invariant checks for the rotation-technique primitives. Each
// function builds one instance from `seed` and returns an empty string when
// every invariant holds, else a description of the first violation.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hamcount/digraph.hpp"
#include "hamcount/errors.hpp"
#include "hamcount/exact.hpp"
#include "hamcount/rotation.hpp"

namespace props {

using namespace hamcount;

inline std::uint32_t pick(std::mt19937_64& gen, std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(gen);
}

inline std::vector<Vertex> shuffled(std::uint32_t n, std::mt19937_64& gen) {
    std::vector<Vertex> p(n);
    for (Vertex v = 0; v < n; ++v) p[v] = v;
    std::shuffle(p.begin(), p.end(), gen);
    return p;
}

inline void add_random_edges(Digraph& d, double p, std::mt19937_64& gen) {
    std::bernoulli_distribution coin(p);
    for (Vertex u = 0; u < d.n(); ++u) {
        for (Vertex v = 0; v < d.n(); ++v) {
            if ((u != v || d.allow_loops()) && coin(gen)) d.add_edge(u, v);
        }
    }
}

inline std::set<Edge> cycle_edges(const std::vector<Vertex>& c) {
    std::set<Edge> out;
    for (std::size_t i = 0; i < c.size(); ++i) out.insert(Edge{c[i], c[(i + 1) % c.size()]});
    return out;
}

inline std::vector<Vertex> rotate_expected(const std::vector<Vertex>& p, std::size_t i, std::size_t j) {
    std::vector<Vertex> out(p.begin(), p.begin() + i + 1);
    out.insert(out.end(), p.begin() + j, p.end());
    out.insert(out.end(), p.begin() + i + 1, p.begin() + j);
    return out;
}

inline std::string rotate_instance(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::uint32_t n = pick(gen, 3, 30);
    const std::uint32_t len = pick(gen, 2, n - 1);  // path v0..v_len
    const std::vector<Vertex> perm = shuffled(n, gen);
    const std::vector<Vertex> verts(perm.begin(), perm.begin() + len + 1);
    const std::size_t i = pick(gen, 1, len - 1);
    const std::size_t j = pick(gen, static_cast<std::uint32_t>(i + 1), len);

    Digraph d(n, false);
    for (std::size_t k = 0; k + 1 < verts.size(); ++k) d.add_edge(verts[k], verts[k + 1]);
    const bool plant = pick(gen, 0, 3) != 0;
    if (plant) {
        d.add_edge(verts[i], verts[j]);
        if (verts[len] != verts[i + 1]) d.add_edge(verts[len], verts[i + 1]);
    }
    add_random_edges(d, 0.05, gen);
    const bool legal = d.has_edge(verts[i], verts[j]) && d.has_edge(verts[len], verts[i + 1]);

    const PathState p(n, verts);
    if (!legal) {
        try {
            rotate(p, i, j, d);
        } catch (const PreconditionError&) {
            return "";
        }
        return "rotation without its edges was accepted";
    }
    const PathState q = rotate(p, i, j, d);
    if (q.vertices() != rotate_expected(verts, i, j)) return "rotation produced the wrong sequence";
    if (q.front() != verts.front()) return "v0 moved";
    std::vector<Vertex> a = verts, b = q.vertices();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return "vertex set changed";
    if (!q.edges_valid(d)) return "rotated path uses a non-edge";
    std::size_t changed = 0;
    std::set<Edge> old;
    for (std::size_t k = 0; k + 1 < verts.size(); ++k) old.insert(Edge{verts[k], verts[k + 1]});
    for (std::size_t k = 0; k + 1 < q.vertices().size(); ++k) {
        if (!old.contains(Edge{q[k], q[k + 1]})) ++changed;
    }
    if (changed > 2) return "more than two edges replaced";
    for (Vertex v = 0; v < n; ++v) {
        if (q.contains(v) && q[q.position(v)] != v) return "position index is stale";
    }

    // A further rotation from the new endpoint, when one is legal, keeps the vertex set.
    for (std::size_t i2 = 1; i2 + 1 <= len; ++i2) {
        if (!d.has_edge(q.back(), q[i2 + 1])) continue;
        for (std::size_t j2 = i2 + 1; j2 <= len; ++j2) {
            if (!d.has_edge(q[i2], q[j2])) continue;
            const PathState r = rotate(q, i2, j2, d);
            std::vector<Vertex> c = r.vertices();
            std::sort(c.begin(), c.end());
            if (c != a || r.front() != verts.front()) return "second rotation lost vertices";
            return "";
        }
    }
    return "";
}

inline std::string patch_instance(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::uint32_t n = pick(gen, 4, 30);
    const std::vector<Vertex> perm = shuffled(n, gen);
    const std::uint32_t l1 = pick(gen, 2, n - 2);
    const std::uint32_t l2 = pick(gen, 2, n - l1);
    const std::vector<Vertex> c1(perm.begin(), perm.begin() + l1);
    const std::vector<Vertex> c2(perm.begin() + l1, perm.begin() + l1 + l2);

    Digraph d(n, false);
    for (const auto& c : {c1, c2}) {
        for (const Edge& e : cycle_edges(c)) d.add_edge(e);
    }
    std::uniform_real_distribution<double> density(0.0, 0.15);
    add_random_edges(d, density(gen), gen);

    bool exists = false;
    for (std::size_t a = 0; a < l1 && !exists; ++a) {
        for (std::size_t b = 0; b < l2 && !exists; ++b) {
            exists = d.has_edge(c1[a], c2[(b + 1) % l2]) && d.has_edge(c2[b], c1[(a + 1) % l1]);
        }
    }
    const auto merged = patch_cycles(c1, c2, d);
    if (merged.has_value() != exists) return "patch presence disagrees with brute force";
    if (!merged) return "";
    if (merged->size() != l1 + l2) return "merged length is not the sum";
    std::vector<Vertex> got = *merged, want(perm.begin(), perm.begin() + l1 + l2);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) return "merged vertex set is not the union";
    std::set<Edge> old = cycle_edges(c1);
    for (const Edge& e : cycle_edges(c2)) old.insert(e);
    std::size_t fresh = 0;
    for (const Edge& e : cycle_edges(*merged)) {
        if (!d.has_edge(e)) return "merged cycle uses a non-edge";
        if (!old.contains(e)) ++fresh;
    }
    if (fresh != 2) return "merge did not use exactly two new edges";
    return "";
}

// Random factor with every cycle of length >= 4 except possibly some short
// cycles marked as inside L. `outside` receives compressible vertices.
struct CompressInstance {
    Digraph d;
    OneFactor m;
    VertexSet l;
    std::vector<std::vector<Vertex>> groups;  // expected groups, v- v v+ or singletons
};

inline CompressInstance make_compress_instance(std::mt19937_64& gen, std::uint32_t n) {
    const std::vector<Vertex> perm = shuffled(n, gen);
    std::vector<std::vector<Vertex>> cycles;
    std::size_t at = 0;
    while (at < n) {
        std::uint32_t len = std::min<std::uint32_t>(pick(gen, 2, 26), static_cast<std::uint32_t>(n - at));
        if (len == 1) {
            cycles.back().push_back(perm[at]);
            ++at;
            continue;
        }
        cycles.emplace_back(perm.begin() + at, perm.begin() + at + len);
        at += len;
    }
    CompressInstance inst{Digraph(n, false), OneFactor::from_cycles(n, cycles), VertexSet(n, true), {}};
    std::bernoulli_distribution mark(0.35);
    std::vector<bool> grouped(n, false);
    for (const auto& c : cycles) {
        if (c.size() < 4) continue;
        std::vector<std::size_t> chosen;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const bool far_prev = chosen.empty() || k - chosen.back() > 10;
            const bool far_first = chosen.empty() || chosen.front() + c.size() - k > 10;
            if (far_prev && far_first && mark(gen)) chosen.push_back(k);
        }
        for (std::size_t k : chosen) {
            const std::size_t len = c.size();
            const Vertex prev = c[(k + len - 1) % len], v = c[k], next = c[(k + 1) % len];
            inst.l.erase(v);
            inst.groups.push_back({prev, v, next});
            grouped[prev] = grouped[v] = grouped[next] = true;
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        if (!grouped[v]) inst.groups.push_back({v});
    }
    for (const Edge& e : inst.m.edges()) inst.d.add_edge(e);
    add_random_edges(inst.d, 0.1, gen);
    return inst;
}

inline std::string compress_instance(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::uint32_t n = pick(gen, 4, 30);
    CompressInstance inst = make_compress_instance(gen, n);

    // Plant a Hamilton cycle of the compressed instance through the groups.
    std::vector<std::size_t> order(inst.groups.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::shuffle(order.begin(), order.end(), gen);
    for (std::size_t k = 0; k < order.size() && order.size() > 1; ++k) {
        const auto& a = inst.groups[order[k]];
        const auto& b = inst.groups[order[(k + 1) % order.size()]];
        if (a.back() != b.front()) inst.d.add_edge(a.back(), b.front());
    }

    const Compression c = compress(inst.d, inst.m, inst.l);
    const std::size_t outside = n - inst.l.size();
    if (c.graph.n() != n - 2 * outside) return "compressed size is not n - 2|outside|";
    if (c.groups.size() != c.graph.n() || c.original_n != n) return "group table size mismatch";
    std::vector<int> seen(n, 0);
    for (std::uint32_t id = 0; id < c.groups.size(); ++id) {
        for (Vertex v : c.groups[id]) {
            ++seen[v];
            if (c.to_compressed[v] != id) return "to_compressed disagrees with groups";
        }
    }
    if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; })) return "groups do not partition";
    for (const auto& g : inst.groups) {
        if (c.groups[c.to_compressed[g.front()]] != g) return "group is not v- v v+";
    }
    if (cycle_type(c.factor).num_cycles != cycle_type(inst.m).num_cycles) return "cycle count changed";
    if (cycle_type(c.factor).num_loops != 0) return "compression created a loop";
    if (!c.factor.is_factor_of(c.graph)) return "compressed factor leaves the compressed graph";
    for (Vertex a = 0; a < c.graph.n(); ++a) {
        for (Vertex b = 0; b < c.graph.n(); ++b) {
            if (a != b && c.graph.has_edge(a, b) != inst.d.has_edge(c.out_rep(a), c.in_rep(b))) {
                return "compressed adjacency is not (out_rep, in_rep)";
            }
        }
    }

    Cycle planted;
    for (std::size_t k : order) planted.push_back(c.to_compressed[inst.groups[k].front()]);
    if (planted.size() >= 2 && !is_hamilton_cycle(c.graph, planted)) return "planted cycle missing after compression";
    if (planted.size() < 2) return "";
    const Cycle full = decompress(c, planted);
    if (!is_hamilton_cycle(inst.d, full)) return "decompressed cycle is not Hamilton";
    const std::set<Edge> fe = cycle_edges(full);
    for (const auto& g : inst.groups) {
        for (std::size_t k = 0; k + 1 < g.size(); ++k) {
            if (!fe.contains(Edge{g[k], g[k + 1]})) return "decompression dropped a factor edge";
        }
    }
    const Cycle back = recompress(c, full);
    if (back.size() != planted.size()) return "recompress changed the length";
    const auto at = std::find(back.begin(), back.end(), planted.front());
    if (at == back.end()) return "recompress lost a vertex";
    Cycle rotated(at, back.end());
    rotated.insert(rotated.end(), back.begin(), at);
    if (rotated != planted) return "round trip is not the identity";
    return "";
}

inline std::string merge_loops_instance(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::uint32_t n = pick(gen, 4, 30);
    const std::vector<Vertex> perm = shuffled(n, gen);
    std::vector<std::vector<Vertex>> cycles;
    std::bernoulli_distribution loop(0.2);
    std::size_t at = 0;
    while (at < n) {
        std::uint32_t len = loop(gen) ? 1 : pick(gen, 2, 12);
        len = std::min<std::uint32_t>(len, static_cast<std::uint32_t>(n - at));
        cycles.emplace_back(perm.begin() + at, perm.begin() + at + len);
        at += len;
    }
    const OneFactor f = OneFactor::from_cycles(n, cycles);
    const CycleType before = cycle_type(f);
    if (before.num_loops == before.num_cycles) return "";  // nothing to merge into

    VertexSet large(n, pick(gen, 0, 1) == 0);
    std::bernoulli_distribution in_large(0.7);
    for (Vertex v = 0; v < n; ++v) {
        if (f[v] == v || in_large(gen)) large.insert(v);
    }
    Digraph d(n, true);
    for (const Edge& e : f.edges()) d.add_edge(e);
    std::uniform_real_distribution<double> density(0.05, 0.4);
    add_random_edges(d, density(gen), gen);

    MergedFactor r;
    try {
        r = merge_loops(f, d, large, seed);
    } catch (const MergeError& e) {
        if (f[e.vertex] != e.vertex) return "merge error names a non-loop vertex";
        return "";
    }
    const CycleType after = cycle_type(r.factor);
    if (after.num_loops != 0) return "loops remain";
    if (after.num_cycles != before.num_cycles - before.num_loops) return "cycle count is off";
    std::set<Vertex> ends;
    for (const Edge& e : r.virtual_edges.edges()) {
        if (!ends.insert(e.from).second || !ends.insert(e.to).second) return "virtual edges share a vertex";
        if (d.has_edge(e)) return "an edge of d was recorded as virtual";
    }
    if (r.virtual_edges.size() > before.num_loops) return "more virtual edges than loops";
    for (const Edge& e : r.factor.edges()) {
        if (!d.has_edge(e) && !r.virtual_edges.contains(e)) return "output edge is neither real nor virtual";
    }
    std::vector<Vertex> merged = r.merged, loops;
    for (Vertex v = 0; v < n; ++v) {
        if (f[v] == v) loops.push_back(v);
    }
    std::sort(merged.begin(), merged.end());
    if (merged != loops) return "merged list is not the loop set";
    std::size_t changed = 0;
    for (Vertex v = 0; v < n; ++v) changed += r.factor[v] != f[v];
    if (changed > 2 * before.num_loops) return "too many image changes";
    for (const auto& c : r.factor.cycles()) {
        if (c.size() > 3) continue;
        const bool untouched = std::all_of(c.begin(), c.end(), [&](Vertex v) { return r.factor[v] == f[v]; });
        if (untouched) continue;  // short cycles already in f are not the merge's doing
        for (Vertex v : c) {
            if (!large.contains(v)) return "short cycle leaves LARGE";
        }
    }
    return "";
}

}  // namespace props
