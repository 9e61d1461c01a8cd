#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hamcount/digraph.hpp"
#include "hamcount/exact.hpp"

namespace hamcount {

struct TailBound {
    double value = 1;      ///< min(1, bound)
    double log_value = 0;  ///< log of the unclipped bound
    bool valid = false;    ///< the bound's precondition holds
    double threshold = 0;  ///< a for the upper tail, eps for the two-sided form
    std::uint64_t n = 0;
    double p = 0;
};

/// Pr(X >= a) < exp(-(a-1) log(a/EX)) for X ~ Bin(n, p); valid iff a > 4np.
TailBound chernoff_upper(double a, std::uint64_t n, double p);

/// Pr(|X - EX| >= eps EX) <= 2 exp(-(eps^2/3) EX); valid iff eps <= 3/2.
TailBound chernoff_two_sided(double eps, std::uint64_t n, double p);

/// Natural log of a positive rational; -inf for zero.
double log_of(const BigRational& x);

/// Exact Bin(n, p) distribution, p taken as the exact rational value of the
/// double. Weights share the denominator den^n, so tails are integer sums.
class ExactBinomial {
public:
    ExactBinomial(std::uint32_t n, double p);

    std::uint32_t n() const noexcept { return n_; }
    const BigRational& p() const noexcept { return p_; }
    BigRational pmf(std::uint32_t k) const;
    /// Pr(X >= k); 1 for k <= 0, 0 for k > n.
    BigRational upper_tail(std::int64_t k) const;
    /// Pr(X >= a) for real a.
    BigRational upper_tail_real(double a) const;
    /// Pr(|X - np| >= eps np), tested exactly per k.
    BigRational two_sided_tail(double eps) const;

private:
    std::uint32_t n_;
    BigRational p_;
    BigCount denom_;                 // den^n
    std::vector<BigCount> weights_;  // C(n,k) num^k (den-num)^(n-k)
    std::vector<BigCount> suffix_;   // suffix_[k] = sum_{j >= k} weights_[j]
};

/// log Pr(X >= k) in floating point by log-sum-exp over lgamma terms.
double log_binomial_upper_tail(std::uint64_t n, double p, std::int64_t k);

struct PairRecord {
    std::uint32_t size1 = 0;
    std::uint32_t size2 = 0;
    std::uint64_t edges = 0;  ///< e(X1, X2)
    int property = 2;         ///< which inequality was tested
    double statistic = 0;     ///< e for property 2; |e - x1 x2 m/n^2| for property 1
    double bound = 0;
    bool pass = true;
};

struct DiscrepancyReport {
    bool exhaustive = false;
    std::uint64_t pairs = 0;       ///< subset pairs examined
    std::uint64_t tests = 0;       ///< inequality evaluations
    std::uint64_t violations = 0;
    std::vector<PairRecord> records;  ///< every test when sampled, violations only when exhaustive
    std::optional<PairRecord> worst;  ///< largest statistic - bound
    bool pass() const noexcept { return violations == 0; }
};

inline constexpr std::uint32_t kExhaustiveMaxN = 12;

struct DegreeReport {
    double lo = 0;
    double hi = 0;
    std::size_t min_degree = 0;
    std::size_t max_degree = 0;
    std::optional<Vertex> bad_vertex;
    bool pass = false;
};

struct GkReport {
    DegreeReport degrees;
    DiscrepancyReport discrepancy;
    double r_over_loglog = 0;  ///< reported, never gated on
    bool pass() const noexcept { return degrees.pass && discrepancy.pass(); }
};

/// Degree window (1 +- 4/log log n) r and e(X1,X2) <= (4r/5) sqrt(|X1||X2|)
/// over |X1|, |X2| <= 3n/5. Exhaustive for n <= 12, else `samples` pairs.
GkReport gk_hypotheses(const Digraph& d, double r, std::uint64_t samples, std::uint64_t seed);

/// Both edge-discrepancy inequalities for D'_{m3}. Property (1)
/// is tested when |X1||X2| >= gate n^2 / log n, property (2) when both sizes
/// are <= 3n/5. Exhaustive for n <= 12.
DiscrepancyReport edge_discrepancy_check(const Digraph& d, std::uint64_t m3, std::uint64_t samples,
                                         std::uint64_t seed, double gate = 4.0);

/// n log((1 - eps) r / e).
double gk_lower_bound(std::uint32_t n, double r, double eps = 0.1);
/// log(n! (r/n)^n). DomainError unless 0 < r <= n.
double falikman_bound(std::uint32_t n, std::uint32_t r);
/// Exact comparison perm >= n! (r/n)^n.
bool falikman_holds(const BigCount& perm, std::uint32_t n, std::uint32_t r);

/// r-regular bipartite digraph (loops allowed): a shifted circulant with both
/// sides permuted, then randomized by degree-preserving edge switches.
Digraph random_regular_bipartite(std::uint32_t n, std::uint32_t r, std::uint64_t seed);

struct Regularized {
    Digraph graph;               ///< edges between kept left and kept right vertices
    VertexSet left;              ///< kept out-side vertices
    VertexSet right;             ///< kept in-side vertices
    std::vector<Edge> removed;   ///< matching edges removed, in removal order
};

/// Repeatedly removes the matching edge at the smallest vertex whose degree
/// (within the kept instance) falls outside target (1 +- eps). Left vertices
/// are checked before right ones.
Regularized regularize_degrees(const Digraph& g, const OneFactor& m, double eps, double target);

/// Edge (v, w) becomes (v, sigma(w)). DomainError unless sigma is a permutation.
Digraph relabel(const Digraph& d, const std::vector<Vertex>& sigma);
/// image becomes sigma o image.
OneFactor relabel_factor(const OneFactor& f, const std::vector<Vertex>& sigma);
std::vector<Vertex> inverse_permutation(const std::vector<Vertex>& sigma);

struct PermutationStats {
    std::uint32_t n = 0;
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> fixed_histogram;  ///< index k counts permutations with k fixed points
    double mean_fixed = 0;
    double sd_fixed = 0;
    double mean_cycles = 0;
    double sd_cycles = 0;
    double sum_cycles = 0;     ///< exact integer sums, for merging
    double sum_cycles_sq = 0;
    std::uint64_t many_cycles = 0;  ///< permutations with >= 2 log n cycles
    double many_cycles_fraction = 0;
};

PermutationStats permutation_cycle_stats(std::uint32_t n, std::uint64_t trials, std::uint64_t seed);

/// Exact rencontres(n, k) / n! for k = 0..n, as doubles.
std::vector<double> rencontres_distribution(std::uint32_t n);

/// Total-variation distance between a histogram and a reference distribution.
double total_variation(const std::vector<std::uint64_t>& hist, const std::vector<double>& ref);

}  // namespace hamcount
