#pragma once

// Brute-force references used by the tests. Deliberately naive and sharing no
// code with the library beyond the Digraph container.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "hamcount/digraph.hpp"

namespace oracle {

using hamcount::Digraph;
using hamcount::Vertex;

inline std::uint64_t hamilton_cycles(const Digraph& d) {
    const std::uint32_t n = d.n();
    if (n < 2) return 0;
    std::vector<Vertex> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    std::uint64_t count = 0;
    do {
        Vertex prev = 0;
        bool ok = true;
        for (Vertex v : rest) {
            if (!d.has_edge(prev, v)) {
                ok = false;
                break;
            }
            prev = v;
        }
        if (ok && d.has_edge(prev, 0)) ++count;
    } while (std::next_permutation(rest.begin(), rest.end()));
    return count;
}

inline std::uint64_t permanent(const Digraph& d) {
    std::vector<Vertex> perm(d.n());
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        for (Vertex v = 0; v < d.n() && ok; ++v) ok = d.has_edge(v, perm[v]);
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

/// a / b in lowest terms.
inline mpq_class ratio(const mpz_class& a, const mpz_class& b) {
    mpq_class q(a, b);
    q.canonicalize();
    return q;
}

inline mpq_class ratio(std::uint64_t a, std::uint64_t b) {
    return ratio(mpz_class(static_cast<unsigned long>(a)), mpz_class(static_cast<unsigned long>(b)));
}

inline mpz_class binom(long n, long k) {
    if (n < 0 || k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

/// Pr(X >= k) for X ~ Bin(n, p), p read as its exact binary value.
inline mpq_class binomial_upper_tail(unsigned n, double p, long k) {
    const mpq_class pq(p), qq = 1 - pq;
    mpq_class total = 0;
    for (long j = std::max(0L, k); j <= static_cast<long>(n); ++j) {
        mpq_class term = binom(n, j);
        for (long i = 0; i < j; ++i) term *= pq;
        for (long i = j; i < static_cast<long>(n); ++i) term *= qq;
        total += term;
    }
    return total;
}

/// pmf of Bin(n, p) as exact rationals, built term by term.
inline std::vector<mpq_class> binomial_pmf(unsigned n, double p) {
    const mpq_class pq(p), qq = 1 - pq;
    std::vector<mpq_class> pow_p(n + 1, 1), pow_q(n + 1, 1);
    for (unsigned k = 1; k <= n; ++k) {
        pow_p[k] = pow_p[k - 1] * pq;
        pow_q[k] = pow_q[k - 1] * qq;
    }
    std::vector<mpq_class> pmf(n + 1);
    for (unsigned k = 0; k <= n; ++k) pmf[k] = mpq_class(binom(n, k)) * pow_p[k] * pow_q[n - k];
    return pmf;
}

/// Natural log of a positive rational without overflow.
inline double log_rational(const mpq_class& q) {
    if (q <= 0) return -INFINITY;
    long en = 0, ed = 0;
    const double dn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
    const double dd = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
    return std::log(dn) - std::log(dd) + static_cast<double>(en - ed) * std::log(2.0);
}

/// rencontres(n, k) / n! for k = 0..n from C(n, k) D(n - k).
inline std::vector<mpq_class> rencontres_pmf(unsigned n) {
    std::vector<mpz_class> der(n + 1);
    der[0] = 1;
    if (n >= 1) der[1] = 0;
    for (unsigned k = 2; k <= n; ++k) der[k] = (k - 1) * (der[k - 1] + der[k - 2]);
    mpz_class fact = 1;
    for (unsigned k = 2; k <= n; ++k) fact *= k;
    std::vector<mpq_class> out(n + 1);
    for (unsigned k = 0; k <= n; ++k) {
        out[k] = ratio(binom(n, k) * der[n - k], fact);
    }
    return out;
}

inline double harmonic(unsigned n) {
    long double h = 0;
    for (unsigned k = n; k >= 1; --k) h += 1.0L / k;
    return static_cast<double>(h);
}

/// Counts size-`size` subsets of [0, m) containing [0, n), and all of them.
inline std::pair<std::uint64_t, std::uint64_t> containment_counts(unsigned n, unsigned m, unsigned size) {
    std::uint64_t hit = 0, all = 0;
    const std::uint32_t need = (1u << n) - 1;
    for (std::uint32_t s = 0; s < (1u << m); ++s) {
        if (static_cast<unsigned>(__builtin_popcount(s)) != size) continue;
        ++all;
        if ((s & need) == need) ++hit;
    }
    return {hit, all};
}

/// Fraction of size-m3 subsets of [0, m0) missing at most t of [0, n).
inline mpq_class almost_containment(unsigned n, unsigned m0, unsigned m3, unsigned t) {
    std::uint64_t hit = 0, all = 0;
    const std::uint32_t h = (1u << n) - 1;
    for (std::uint32_t s = 0; s < (1u << m0); ++s) {
        if (static_cast<unsigned>(__builtin_popcount(s)) != m3) continue;
        ++all;
        if (static_cast<unsigned>(__builtin_popcount(h & ~s)) <= t) ++hit;
    }
    if (all == 0) return 0;
    return ratio(hit, all);
}

inline std::vector<Vertex> random_permutation(std::uint32_t n, std::mt19937_64& gen) {
    std::vector<Vertex> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), gen);
    return p;
}

}  // namespace oracle
