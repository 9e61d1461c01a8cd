#include "hamcount/matching.hpp"

#include <limits>
#include <queue>

#include "hamcount/rng.hpp"

namespace hamcount {
namespace {
constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
}

BipartiteMatcher::BipartiteMatcher(const Digraph& d, std::uint64_t seed)
    : n_(d.n()),
      adj_(d.n()),
      mate_left_(d.n(), kFree),
      mate_right_(d.n(), kFree),
      level_(d.n(), kInf),
      cursor_(d.n(), 0) {
    Rng rng(seed);
    for (Vertex v = 0; v < n_; ++v) {
        adj_[v] = d.out(v);
        rng.shuffle(adj_[v]);
    }
    order_ = rng.permutation(n_);
}

bool BipartiteMatcher::bfs() {
    std::queue<Vertex> q;
    for (Vertex u : order_) {
        if (mate_left_[u] == kFree) {
            level_[u] = 0;
            q.push(u);
        } else {
            level_[u] = kInf;
        }
    }
    bool found = false;
    while (!q.empty()) {
        const Vertex u = q.front();
        q.pop();
        for (Vertex w : adj_[u]) {
            const Vertex next = mate_right_[w];
            if (next == kFree) {
                found = true;
            } else if (level_[next] == kInf) {
                level_[next] = level_[u] + 1;
                q.push(next);
            }
        }
    }
    return found;
}

bool BipartiteMatcher::dfs(Vertex u) {
    for (std::size_t& i = cursor_[u]; i < adj_[u].size(); ++i) {
        const Vertex w = adj_[u][i];
        const Vertex next = mate_right_[w];
        if (next == kFree || (level_[next] == level_[u] + 1 && dfs(next))) {
            mate_left_[u] = w;
            mate_right_[w] = u;
            ++i;
            return true;
        }
    }
    level_[u] = kInf;
    return false;
}

std::size_t BipartiteMatcher::solve() {
    std::size_t size = 0;
    for (Vertex v = 0; v < n_; ++v) size += mate_left_[v] != kFree;
    while (bfs()) {
        std::fill(cursor_.begin(), cursor_.end(), 0);
        for (Vertex u : order_) {
            if (mate_left_[u] == kFree && dfs(u)) ++size;
        }
    }
    return size;
}

std::optional<OneFactor> find_one_factor(const Digraph& d, std::uint64_t seed) {
    BipartiteMatcher matcher(d, seed);
    if (matcher.solve() != d.n()) return std::nullopt;
    return OneFactor(matcher.mate_left());
}

}  // namespace hamcount
