#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hamcount/digraph.hpp"
#include "hamcount/rng.hpp"

namespace hamcount {

enum class Universe {
    kLoopless,  ///< the n(n-1) ordered pairs of distinct vertices
    kLoopful,   ///< all n^2 ordered pairs, loops included
};

std::uint64_t universe_size(std::uint32_t n, Universe u) noexcept;

/// The pair with index k in the canonical (row-major) enumeration of a universe.
Edge pair_at(std::uint32_t n, Universe u, std::uint64_t k) noexcept;

/// A uniformly random ordering of a pair universe, or a prefix of one.
///
/// Full sequences come from a forward Fisher-Yates shuffle. Prefixes come from
/// the same shuffle run lazily (swaps kept in a hash map), so for a fixed seed
/// a prefix is exactly the leading part of the full order.
class EdgeSequence {
public:
    EdgeSequence() = default;
    EdgeSequence(std::uint32_t n, Universe universe, std::vector<Edge> order);

    std::uint32_t n() const noexcept { return n_; }
    Universe universe() const noexcept { return universe_; }
    const std::vector<Edge>& order() const noexcept { return order_; }
    std::size_t size() const noexcept { return order_.size(); }
    const Edge& operator[](std::size_t i) const { return order_[i]; }

    /// True when the order covers the whole universe.
    bool complete() const noexcept { return order_.size() == universe_size(n_, universe_); }

    /// D_m = {e_1, ..., e_m}. Throws DomainError if m exceeds the stored length.
    Digraph prefix(std::size_t m) const;

private:
    std::uint32_t n_ = 0;
    Universe universe_ = Universe::kLoopless;
    std::vector<Edge> order_;
};

/// Lazy sampler over a pair universe without replacement.
class ProcessSampler {
public:
    ProcessSampler(std::uint32_t n, Universe universe, std::uint64_t seed);

    bool exhausted() const noexcept { return drawn_ == size_; }
    std::uint64_t drawn() const noexcept { return drawn_; }
    Edge next();

private:
    std::uint32_t n_;
    Universe universe_;
    std::uint64_t size_;
    std::uint64_t drawn_ = 0;
    Rng rng_;
    std::unordered_map<std::uint64_t, std::uint64_t> moved_;
};

/// Full uniformly random order of the universe. Throws DomainError if n < 2.
EdgeSequence gen_process(std::uint32_t n, Universe universe, std::uint64_t seed);

/// First m pairs of gen_process(n, universe, seed) without materializing the rest.
EdgeSequence gen_process_prefix(std::uint32_t n, Universe universe, std::uint64_t seed,
                                std::size_t m);

/// Loopful sequence paired with the loopless sequence obtained by deleting its
/// loops. For every m, the non-loop edges of loopful.prefix(m) lie in
/// loopless.prefix(m).
struct CoupledProcess {
    EdgeSequence loopful;
    EdgeSequence loopless;

    /// Checks the coupling invariant for one m (both prefixes must exist).
    bool coupling_holds(std::size_t m) const;
};

CoupledProcess couple(const EdgeSequence& loopful);

/// Incremental tracker for min{m : all in- and out-degrees >= 1}.
class HittingTracker {
public:
    explicit HittingTracker(std::uint32_t n);

    /// Feeds the next edge; returns true once every degree is positive.
    bool add(const Edge& e);
    bool reached() const noexcept { return missing_out_ == 0 && missing_in_ == 0; }
    std::size_t steps() const noexcept { return steps_; }

private:
    std::vector<std::uint32_t> out_;
    std::vector<std::uint32_t> in_;
    std::uint32_t missing_out_;
    std::uint32_t missing_in_;
    std::size_t steps_ = 0;
};

/// Least m such that seq.prefix(m) has every in- and out-degree >= 1, or
/// nullopt if the stored prefix never reaches it.
std::optional<std::size_t> try_hitting_time(const EdgeSequence& seq);

/// As try_hitting_time, but a sequence whose stored part never reaches the
/// hitting time is a PreconditionError (complete sequences always reach it).
std::size_t hitting_time(const EdgeSequence& seq);

/// Streams a loopful process until both the loopful hitting time m*' and the
/// hitting time m* of the derived loopless process are reached, and both
/// sequences hold at least `min_length` edges.
CoupledProcess sample_coupled_until_hitting(std::uint32_t n, std::uint64_t seed,
                                            std::size_t min_length = 0);

/// Streams a process only until its hitting time and returns it.
std::size_t sample_hitting_time(std::uint32_t n, Universe universe, std::uint64_t seed);

}  // namespace hamcount
