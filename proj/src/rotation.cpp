#include "hamcount/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "hamcount/errors.hpp"
#include "hamcount/rng.hpp"

namespace hamcount {
namespace {

std::string edge_str(Vertex a, Vertex b) {
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

std::size_t default_budget(std::uint32_t n) {
    return static_cast<std::size_t>(std::ceil(3.0 * std::log(std::max<double>(n, 2.0))));
}

}  // namespace

void VirtualEdgeSet::insert(Edge e) {
    if (used_.contains(e.from) || used_.contains(e.to)) {
        throw PreconditionError("virtual edge " + edge_str(e.from, e.to) +
                                " shares a vertex with an existing virtual edge");
    }
    used_.insert(e.from);
    used_.insert(e.to);
    edges_.insert(e);
    list_.push_back(e);
}

PathState::PathState(std::uint32_t n, std::vector<Vertex> vertices)
    : vertices_(std::move(vertices)), pos_(n, kAbsent) {
    if (vertices_.empty()) throw PreconditionError("empty path");
    for (std::uint32_t i = 0; i < vertices_.size(); ++i) {
        const Vertex v = vertices_[i];
        if (v >= n) throw PreconditionError("path vertex " + std::to_string(v) + " out of range");
        if (pos_[v] != kAbsent) throw PreconditionError("path repeats vertex " + std::to_string(v));
        pos_[v] = i;
    }
}

bool PathState::edges_valid(const Digraph& d, const EdgeSet& extra) const {
    for (std::size_t k = 0; k + 1 < vertices_.size(); ++k) {
        const Edge e{vertices_[k], vertices_[k + 1]};
        if (!d.has_edge(e) && !extra.contains(e)) return false;
    }
    return true;
}

PathState rotate(const PathState& p, std::size_t i, std::size_t j, const Digraph& d) {
    const std::size_t l = p.length();
    if (!(1 <= i && i < j && j <= l)) {
        throw PreconditionError("rotation indices need 1 <= i < j <= l (i=" + std::to_string(i) +
                                ", j=" + std::to_string(j) + ", l=" + std::to_string(l) + ")");
    }
    if (!d.has_edge(p[i], p[j])) throw PreconditionError("rotation edge " + edge_str(p[i], p[j]) + " missing");
    if (!d.has_edge(p[l], p[i + 1])) {
        throw PreconditionError("rotation edge " + edge_str(p[l], p[i + 1]) + " missing");
    }
    const auto& v = p.vertices();
    std::vector<Vertex> out;
    out.reserve(v.size());
    out.insert(out.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i + 1));
    out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(j), v.end());
    out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(i + 1),
               v.begin() + static_cast<std::ptrdiff_t>(j));
    return PathState(d.n(), std::move(out));
}

std::optional<Cycle> patch_cycles(const Cycle& c1, const Cycle& c2, const Digraph& d) {
    if (c1.empty() || c2.empty()) return std::nullopt;
    std::unordered_map<Vertex, std::size_t> pos2;
    pos2.reserve(c2.size() * 2);
    for (std::size_t k = 0; k < c2.size(); ++k) pos2.emplace(c2[k], k);

    const std::size_t len1 = c1.size();
    const std::size_t len2 = c2.size();
    for (std::size_t a = 0; a < len1; ++a) {
        const Vertex v1 = c1[a];
        const Vertex w1 = c1[(a + 1) % len1];
        std::optional<std::size_t> best;
        for (Vertex w2 : d.out(v1)) {
            auto it = pos2.find(w2);
            if (it == pos2.end()) continue;
            const std::size_t b = (it->second + len2 - 1) % len2;
            if (d.has_edge(c2[b], w1) && (!best || b < *best)) best = b;
        }
        if (!best) continue;
        Cycle merged;
        merged.reserve(len1 + len2);
        for (std::size_t k = 1; k <= len1; ++k) merged.push_back(c1[(a + k) % len1]);
        for (std::size_t k = 1; k <= len2; ++k) merged.push_back(c2[(*best + k) % len2]);
        return merged;
    }
    return std::nullopt;
}

std::optional<ClosedPath> close_path(const PathState& p, const Digraph& d, const EdgeSet& forbidden,
                                     const CloseOptions& opts, std::uint64_t seed) {
    const std::uint32_t n = d.n();
    const std::size_t budget = opts.rotation_budget ? opts.rotation_budget : default_budget(n);
    auto allowed = [&](Vertex a, Vertex b) {
        return d.has_edge(a, b) && !forbidden.contains(Edge{a, b});
    };
    const Vertex v0 = p.front();
    if (allowed(p.back(), v0)) return ClosedPath{p.vertices(), 0};

    struct Node {
        std::vector<Vertex> path;
        std::size_t depth;
    };
    std::deque<Node> frontier;
    frontier.push_back(Node{p.vertices(), 0});
    std::size_t stored = 1;
    std::vector<unsigned char> seen_end(n, 0);
    seen_end[p.back()] = 1;
    std::vector<std::uint32_t> pos(n, PathState::kAbsent);
    std::vector<Vertex> ends;
    Rng rng(seed);

    while (!frontier.empty()) {
        Node node = std::move(frontier.front());
        frontier.pop_front();
        if (node.depth >= budget) continue;
        const auto& path = node.path;
        const std::size_t l = path.size() - 1;
        for (std::uint32_t k = 0; k <= l; ++k) pos[path[k]] = k;

        ends = d.out(path[l]);
        rng.shuffle(ends);
        std::optional<ClosedPath> closed;
        for (Vertex y : ends) {
            const std::uint32_t py = pos[y];
            if (py == PathState::kAbsent || py < 2 || py + 1 > l) continue;
            if (forbidden.contains(Edge{path[l], y})) continue;
            const std::size_t i = py - 1;
            const Vertex x = path[i];
            for (Vertex z : d.out(x)) {
                const std::uint32_t j = pos[z];
                if (j == PathState::kAbsent || j < i + 2 || j > l) continue;
                if (forbidden.contains(Edge{x, z})) continue;
                const Vertex new_end = path[j - 1];
                if (seen_end[new_end]) continue;
                seen_end[new_end] = 1;

                std::vector<Vertex> next;
                next.reserve(path.size());
                next.insert(next.end(), path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i + 1));
                next.insert(next.end(), path.begin() + j, path.end());
                next.insert(next.end(), path.begin() + static_cast<std::ptrdiff_t>(i + 1), path.begin() + j);
                if (allowed(new_end, v0)) {
                    closed = ClosedPath{std::move(next), node.depth + 1};
                    break;
                }
                if (stored < opts.max_states) {
                    frontier.push_back(Node{std::move(next), node.depth + 1});
                    ++stored;
                }
            }
            if (closed) break;
        }
        for (Vertex v : path) pos[v] = PathState::kAbsent;
        if (closed) return closed;
    }
    return std::nullopt;
}

std::optional<Elimination> eliminate_forbidden(const Cycle& h, const EdgeSet& forbidden,
                                               const Digraph& d, const CloseOptions& opts,
                                               std::uint64_t seed) {
    const std::size_t len = h.size();
    auto count_forbidden = [&](const Cycle& c) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            k += forbidden.contains(Edge{c[i], c[(i + 1) % c.size()]});
        }
        return k;
    };
    for (std::size_t i = 0; i < len; ++i) {
        const Edge e{h[i], h[(i + 1) % len]};
        if (!forbidden.contains(e) && !d.has_edge(e)) {
            throw PreconditionError("cycle edge " + edge_str(e.from, e.to) + " is neither forbidden nor in the digraph");
        }
    }

    Elimination out;
    out.cycle = h;
    std::size_t remaining = count_forbidden(h);
    while (remaining > 0) {
        const Cycle& c = out.cycle;
        std::size_t k = 0;
        while (!forbidden.contains(Edge{c[k], c[(k + 1) % len]})) ++k;
        std::vector<Vertex> path;
        path.reserve(len);
        for (std::size_t t = 1; t <= len; ++t) path.push_back(c[(k + t) % len]);
        auto closed = close_path(PathState(d.n(), std::move(path)), d, forbidden, opts, seed + out.rounds);
        if (!closed) return std::nullopt;
        const std::size_t now = count_forbidden(closed->cycle);
        if (now >= remaining) throw std::logic_error("forbidden-edge elimination made no progress");
        remaining = now;
        out.cycle = std::move(closed->cycle);
        out.rotations += closed->rotations;
        ++out.rounds;
    }
    out.edges_changed = cycle_edge_difference(h, out.cycle);
    return out;
}

MergedFactor merge_loops(const OneFactor& f, const Digraph& d, const VertexSet& large, std::uint64_t seed) {
    const std::uint32_t n = f.n();
    std::vector<Vertex> image = f.image();
    std::vector<Vertex> pred(n);
    for (Vertex v = 0; v < n; ++v) pred[image[v]] = v;

    std::vector<Vertex> loops;
    for (Vertex v = 0; v < n; ++v) {
        if (image[v] == v) {
            if (!large.contains(v)) {
                throw PreconditionError("loop vertex " + std::to_string(v) + " is outside LARGE");
            }
            loops.push_back(v);
        }
    }

    MergedFactor out;
    std::vector<unsigned char> used(n, 0);
    Rng rng(seed);
    auto short_cycle_ok = [&](Vertex on_cycle) {
        // Merging into a 2-cycle yields a 3-cycle, which must lie inside LARGE.
        if (image[image[on_cycle]] != on_cycle) return true;
        return large.contains(on_cycle) && large.contains(image[on_cycle]);
    };

    for (Vertex v : loops) {
        struct Candidate {
            bool forward;  // via (v0, v); otherwise via (v, v0)
            Vertex v0;
            Vertex other;  // v1 for forward, predecessor u of v0 otherwise
            bool needs_virtual;
        };
        std::vector<Candidate> cands;
        for (Vertex v0 : d.in(v)) {
            if (v0 == v || image[v0] == v0 || used[v0]) continue;
            const Vertex v1 = image[v0];
            if (used[v1] || !short_cycle_ok(v0)) continue;
            cands.push_back({true, v0, v1, !d.has_edge(v, v1)});
        }
        for (Vertex v0 : d.out(v)) {
            if (v0 == v || image[v0] == v0 || used[v0]) continue;
            const Vertex u = pred[v0];
            if (used[u] || !short_cycle_ok(v0)) continue;
            cands.push_back({false, v0, u, !d.has_edge(u, v)});
        }
        if (cands.empty()) {
            throw MergeError("loop at " + std::to_string(v) +
                             " has no neighbour on another cycle avoiding used vertices", v);
        }
        rng.shuffle(cands);
        std::stable_partition(cands.begin(), cands.end(), [](const Candidate& c) { return !c.needs_virtual; });
        const Candidate& c = cands.front();
        if (c.forward) {
            image[c.v0] = v;
            image[v] = c.other;
            pred[v] = c.v0;
            pred[c.other] = v;
            if (c.needs_virtual) out.virtual_edges.insert(Edge{v, c.other});
        } else {
            image[c.other] = v;
            image[v] = c.v0;
            pred[v] = c.other;
            pred[c.v0] = v;
            if (c.needs_virtual) out.virtual_edges.insert(Edge{c.other, v});
        }
        used[v] = used[c.v0] = used[c.other] = 1;
        out.merged.push_back(v);
    }

    out.factor = OneFactor(std::move(image));
    for (Vertex v : out.merged) {
        const Vertex a = out.factor[v];
        const Vertex b = out.factor[a];
        if (a == v) throw std::logic_error("merge_loops left a loop");
        const bool len2 = b == v;
        const bool len3 = out.factor[b] == v;
        if ((len2 || len3) && !(large.contains(a) && large.contains(b))) {
            throw std::logic_error("merge_loops created a short cycle outside LARGE");
        }
    }
    return out;
}

Compression compress(const Digraph& d, const OneFactor& m, const VertexSet& l) {
    const std::uint32_t n = m.n();
    if (d.n() != n || l.universe() != n) throw PreconditionError("compress: size mismatch");
    constexpr std::uint32_t kIsolation = 10;

    std::vector<Vertex> pred(n);
    for (Vertex v = 0; v < n; ++v) pred[m[v]] = v;

    std::vector<Vertex> outside;
    for (Vertex v = 0; v < n; ++v) {
        if (!l.contains(v)) outside.push_back(v);
    }
    for (Vertex v : outside) {
        Vertex w = v;
        for (std::uint32_t k = 1; k <= 3; ++k) {
            w = m[w];
            if (w == v) {
                throw CompressionError("vertex " + std::to_string(v) + " outside L lies on a cycle of length " +
                                           std::to_string(k),
                                       {v});
            }
        }
        w = v;
        for (std::uint32_t k = 1; k <= kIsolation; ++k) {
            w = m[w];
            if (w == v) break;
            if (!l.contains(w)) {
                throw CompressionError("vertices " + std::to_string(v) + " and " + std::to_string(w) +
                                           " outside L are within distance " + std::to_string(k) + " on M",
                                       {v, w});
            }
        }
    }

    constexpr Vertex kNone = ~Vertex{0};
    std::vector<Vertex> triple_of(n, kNone);
    for (std::uint32_t t = 0; t < outside.size(); ++t) {
        const Vertex v = outside[t];
        triple_of[pred[v]] = triple_of[v] = triple_of[m[v]] = t;
    }

    Compression c;
    c.original_n = n;
    c.to_compressed.assign(n, kNone);
    for (Vertex u = 0; u < n; ++u) {
        if (c.to_compressed[u] != kNone) continue;
        const auto id = static_cast<Vertex>(c.groups.size());
        if (triple_of[u] == kNone) {
            c.groups.push_back({u});
            c.to_compressed[u] = id;
        } else {
            const Vertex v = outside[triple_of[u]];
            c.groups.push_back({pred[v], v, m[v]});
            c.to_compressed[pred[v]] = c.to_compressed[v] = c.to_compressed[m[v]] = id;
        }
    }

    const auto nc = static_cast<std::uint32_t>(c.groups.size());
    c.graph = Digraph(nc, d.allow_loops());
    for (const Edge& e : d.edges()) {
        const Vertex a = c.to_compressed[e.from];
        const Vertex b = c.to_compressed[e.to];
        if (c.out_rep(a) != e.from || c.in_rep(b) != e.to) continue;
        if (a == b && !d.allow_loops()) continue;
        c.graph.add_edge(a, b);
    }

    std::vector<Vertex> image(nc);
    for (Vertex x = 0; x < nc; ++x) {
        const Vertex succ = m[c.out_rep(x)];
        const Vertex y = c.to_compressed[succ];
        if (c.in_rep(y) != succ) throw std::logic_error("compression broke a cycle of M");
        if (y == x) throw std::logic_error("compression turned a cycle of M into a loop");
        image[x] = y;
    }
    c.factor = OneFactor(std::move(image));
    return c;
}

Cycle decompress(const Compression& c, const Cycle& compressed) {
    Cycle out;
    out.reserve(c.original_n);
    for (Vertex x : compressed) {
        const auto& g = c.groups.at(x);
        out.insert(out.end(), g.begin(), g.end());
    }
    return out;
}

Cycle recompress(const Compression& c, const Cycle& original) {
    const std::size_t len = original.size();
    std::size_t start = 0;
    while (start < len && c.in_rep(c.to_compressed[original[start]]) != original[start]) ++start;
    if (start == len) throw PreconditionError("cycle never enters a group at its first member");
    Cycle out;
    std::size_t k = 0;
    while (k < len) {
        const Vertex x = c.to_compressed[original[(start + k) % len]];
        const auto& g = c.groups[x];
        for (std::size_t t = 0; t < g.size(); ++t) {
            if (k + t >= len || original[(start + k + t) % len] != g[t]) {
                throw PreconditionError("cycle does not traverse compressed group contiguously");
            }
        }
        out.push_back(x);
        k += g.size();
    }
    return out;
}

std::size_t cycle_edge_difference(const Cycle& a, const Cycle& b) {
    EdgeSet ea;
    for (std::size_t i = 0; i < a.size(); ++i) ea.insert(Edge{a[i], a[(i + 1) % a.size()]});
    std::size_t diff = 0;
    for (std::size_t i = 0; i < b.size(); ++i) diff += !ea.contains(Edge{b[i], b[(i + 1) % b.size()]});
    return diff;
}

bool is_hamilton_cycle(const Digraph& d, const Cycle& c) {
    const std::uint32_t n = d.n();
    if (n < 2 || c.size() != n) return false;
    std::vector<unsigned char> seen(n, 0);
    for (Vertex v : c) {
        if (v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex a = c[i];
        const Vertex b = c[(i + 1) % n];
        if (a == b || !d.has_edge(a, b)) return false;
    }
    return true;
}

}  // namespace hamcount
