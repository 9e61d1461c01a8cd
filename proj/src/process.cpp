#include "hamcount/process.hpp"

#include <numeric>
#include <string>

#include "hamcount/errors.hpp"

namespace hamcount {

std::uint64_t universe_size(std::uint32_t n, Universe u) noexcept {
    const std::uint64_t nn = n;
    return u == Universe::kLoopful ? nn * nn : nn * (nn == 0 ? 0 : nn - 1);
}

Edge pair_at(std::uint32_t n, Universe u, std::uint64_t k) noexcept {
    if (u == Universe::kLoopful) {
        return Edge{static_cast<Vertex>(k / n), static_cast<Vertex>(k % n)};
    }
    const auto from = static_cast<Vertex>(k / (n - 1));
    auto to = static_cast<Vertex>(k % (n - 1));
    if (to >= from) ++to;
    return Edge{from, to};
}

EdgeSequence::EdgeSequence(std::uint32_t n, Universe universe, std::vector<Edge> order)
    : n_(n), universe_(universe), order_(std::move(order)) {}

Digraph EdgeSequence::prefix(std::size_t m) const {
    if (m > order_.size()) {
        throw DomainError("prefix length " + std::to_string(m) + " exceeds stored sequence length " +
                          std::to_string(order_.size()));
    }
    return Digraph(n_, universe_ == Universe::kLoopful,
                   std::span<const Edge>(order_.data(), m));
}

ProcessSampler::ProcessSampler(std::uint32_t n, Universe universe, std::uint64_t seed)
    : n_(n), universe_(universe), size_(universe_size(n, universe)), rng_(seed) {
    if (n < 2) throw DomainError("edge process needs n >= 2, got " + std::to_string(n));
}

Edge ProcessSampler::next() {
    if (exhausted()) throw PreconditionError("edge process exhausted");
    // Step i of forward Fisher-Yates over the implicit identity array.
    const std::uint64_t i = drawn_++;
    const std::uint64_t j = i + rng_.below(size_ - i);
    auto value_at = [this](std::uint64_t k) {
        auto it = moved_.find(k);
        return it == moved_.end() ? k : it->second;
    };
    const std::uint64_t picked = value_at(j);
    const std::uint64_t displaced = value_at(i);
    if (j != i) moved_[j] = displaced;
    moved_.erase(i);
    return pair_at(n_, universe_, picked);
}

EdgeSequence gen_process(std::uint32_t n, Universe universe, std::uint64_t seed) {
    if (n < 2) throw DomainError("edge process needs n >= 2, got " + std::to_string(n));
    const std::uint64_t size = universe_size(n, universe);
    std::vector<std::uint64_t> idx(size);
    std::iota(idx.begin(), idx.end(), std::uint64_t{0});
    Rng rng(seed);
    std::vector<Edge> order;
    order.reserve(size);
    for (std::uint64_t i = 0; i < size; ++i) {
        const std::uint64_t j = i + rng.below(size - i);
        std::swap(idx[i], idx[j]);
        order.push_back(pair_at(n, universe, idx[i]));
    }
    return EdgeSequence(n, universe, std::move(order));
}

EdgeSequence gen_process_prefix(std::uint32_t n, Universe universe, std::uint64_t seed,
                                std::size_t m) {
    ProcessSampler sampler(n, universe, seed);
    if (m > universe_size(n, universe)) {
        throw DomainError("prefix length exceeds universe size");
    }
    std::vector<Edge> order;
    order.reserve(m);
    for (std::size_t k = 0; k < m; ++k) order.push_back(sampler.next());
    return EdgeSequence(n, universe, std::move(order));
}

bool CoupledProcess::coupling_holds(std::size_t m) const {
    if (m > loopful.size() || m > loopless.size()) return false;
    EdgeSet ll(loopless.order().begin(), loopless.order().begin() + static_cast<std::ptrdiff_t>(m));
    for (std::size_t k = 0; k < m; ++k) {
        const Edge& e = loopful[k];
        if (!e.is_loop() && !ll.contains(e)) return false;
    }
    return true;
}

CoupledProcess couple(const EdgeSequence& loopful) {
    if (loopful.universe() != Universe::kLoopful) {
        throw PreconditionError("couple() expects a sequence over the loopful universe");
    }
    std::vector<Edge> ll;
    ll.reserve(loopful.size());
    for (const Edge& e : loopful.order()) {
        if (!e.is_loop()) ll.push_back(e);
    }
    return CoupledProcess{loopful, EdgeSequence(loopful.n(), Universe::kLoopless, std::move(ll))};
}

HittingTracker::HittingTracker(std::uint32_t n)
    : out_(n, 0), in_(n, 0), missing_out_(n), missing_in_(n) {}

bool HittingTracker::add(const Edge& e) {
    ++steps_;
    if (out_[e.from]++ == 0) --missing_out_;
    if (in_[e.to]++ == 0) --missing_in_;
    return reached();
}

std::optional<std::size_t> try_hitting_time(const EdgeSequence& seq) {
    HittingTracker tracker(seq.n());
    if (tracker.reached()) return 0;
    for (const Edge& e : seq.order()) {
        if (tracker.add(e)) return tracker.steps();
    }
    return std::nullopt;
}

std::size_t hitting_time(const EdgeSequence& seq) {
    auto m = try_hitting_time(seq);
    if (!m) {
        throw PreconditionError("stored prefix of length " + std::to_string(seq.size()) +
                                " ends before the hitting time");
    }
    return *m;
}

CoupledProcess sample_coupled_until_hitting(std::uint32_t n, std::uint64_t seed,
                                            std::size_t min_length) {
    ProcessSampler sampler(n, Universe::kLoopful, seed);
    HittingTracker loopful_hit(n);
    HittingTracker loopless_hit(n);
    std::vector<Edge> loopful;
    std::vector<Edge> loopless;
    while (!sampler.exhausted()) {
        if (loopful_hit.reached() && loopless_hit.reached() && loopful.size() >= min_length &&
            loopless.size() >= min_length) {
            break;
        }
        const Edge e = sampler.next();
        loopful.push_back(e);
        loopful_hit.add(e);
        if (!e.is_loop()) {
            loopless.push_back(e);
            loopless_hit.add(e);
        }
    }
    return CoupledProcess{EdgeSequence(n, Universe::kLoopful, std::move(loopful)),
                          EdgeSequence(n, Universe::kLoopless, std::move(loopless))};
}

std::size_t sample_hitting_time(std::uint32_t n, Universe universe, std::uint64_t seed) {
    ProcessSampler sampler(n, universe, seed);
    HittingTracker tracker(n);
    while (!tracker.reached()) tracker.add(sampler.next());
    return tracker.steps();
}

}  // namespace hamcount
