#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hamcount/digraph.hpp"

namespace hamcount {

/// Exact non-negative (or signed, for intermediate sums) integer.
using BigCount = mpz_class;
using BigRational = mpq_class;

std::string to_decimal(const BigCount& x);
BigCount factorial(std::uint32_t n);
BigCount binomial(std::int64_t n, std::int64_t k);  ///< 0 when k < 0, k > n or n < 0

/// A 1-factor as a permutation: image[v] is the successor of v.
class OneFactor {
public:
    OneFactor() = default;
    /// Throws DomainError unless `image` is a permutation of [0, n).
    explicit OneFactor(std::vector<Vertex> image);

    static OneFactor identity(std::uint32_t n);
    /// Factor whose only cycle visits `cycle` in order.
    static OneFactor from_cycle(std::uint32_t n, std::span<const Vertex> cycle);
    /// Factor from a list of vertex-disjoint cycles covering [0, n).
    static OneFactor from_cycles(std::uint32_t n, const std::vector<std::vector<Vertex>>& cycles);

    std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(image_.size()); }
    const std::vector<Vertex>& image() const noexcept { return image_; }
    Vertex operator[](Vertex v) const { return image_[v]; }

    /// Cycles in order of their smallest vertex, each starting at that vertex.
    std::vector<std::vector<Vertex>> cycles() const;
    std::vector<Edge> edges() const;

    /// True if every (v, image[v]) is an edge of `d`.
    bool is_factor_of(const Digraph& d) const;

    friend bool operator==(const OneFactor&, const OneFactor&) = default;

private:
    std::vector<Vertex> image_;
};

struct CycleType {
    std::size_t num_loops = 0;
    std::size_t num_cycles = 0;  ///< loops included
    friend bool operator==(const CycleType&, const CycleType&) = default;
};

CycleType cycle_type(const OneFactor& f);

inline constexpr std::uint32_t kDefaultExactCap = 24;

/// Number of directed Hamilton cycles, each counted once. Subset dynamic
/// program anchored at vertex 0; loops are ignored. Throws ResourceError when
/// n > cap.
BigCount count_hamilton_cycles(const Digraph& d, std::uint32_t cap = kDefaultExactCap);

/// Permanent of the 0/1 adjacency matrix (diagonal = loops), i.e. the number
/// of 1-factors. Ryser's formula over a Gray-code column order. Throws
/// ResourceError when n > cap.
BigCount count_one_factors(const Digraph& d, std::uint32_t cap = kDefaultExactCap);

struct FactorEnumeration {
    std::vector<OneFactor> factors;
    bool truncated = false;
};

/// Distinct 1-factors in lexicographic order of the image array, at most `limit`.
FactorEnumeration enumerate_one_factors(const Digraph& d, std::size_t limit);

/// Permutations of n elements with exactly k fixed points. DomainError if k > n.
BigCount rencontres(std::uint32_t n, std::uint32_t k);
BigCount derangements(std::uint32_t n);

}  // namespace hamcount
