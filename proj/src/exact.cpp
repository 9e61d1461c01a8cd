#include "hamcount/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

#include "hamcount/errors.hpp"

namespace hamcount {
namespace {

BigCount from_u64(std::uint64_t x) {
    BigCount r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
    return r;
}

BigCount from_i128(__int128 x) {
    const bool negative = x < 0;
    unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(x) : static_cast<unsigned __int128>(x);
    BigCount r = from_u64(static_cast<std::uint64_t>(mag >> 64));
    r <<= 64;
    r += from_u64(static_cast<std::uint64_t>(mag));
    if (negative) r = -r;
    return r;
}

void check_cap(const Digraph& d, std::uint32_t cap, std::uint32_t hard_limit, const char* what) {
    const std::uint32_t limit = std::min(cap, hard_limit);
    if (d.n() > limit) {
        throw ResourceError(std::string(what) + ": n = " + std::to_string(d.n()) +
                            " exceeds the exact-counting cap of " + std::to_string(limit));
    }
}

// Hamilton cycle DP. Vertex v in 1..n-1 is bit v-1 of a subset mask;
// paths[S*(n-1) + (v-1)] counts paths 0 -> ... -> v visiting exactly {0} u S.
// `Ring` supplies zero/one/add for the coefficient arithmetic.
template <typename Ring>
typename Ring::value_type hamilton_dp(const Digraph& d, const Ring& ring) {
    using T = typename Ring::value_type;
    const std::uint32_t n = d.n();
    const std::uint32_t k = n - 1;
    std::vector<std::uint32_t> in_mask(k, 0);
    for (const Edge& e : d.edges()) {
        if (e.is_loop() || e.from == 0 || e.to == 0) continue;
        in_mask[e.to - 1] |= 1u << (e.from - 1);
    }
    const std::uint32_t full = (k == 32) ? ~0u : ((1u << k) - 1);
    std::vector<T> paths((static_cast<std::size_t>(full) + 1) * k, ring.zero());
    for (Vertex v = 1; v < n; ++v) {
        if (d.has_edge(0, v)) paths[(std::size_t{1} << (v - 1)) * k + (v - 1)] = ring.one();
    }
    for (std::uint32_t s = 1; s <= full; ++s) {
        if (std::has_single_bit(s)) continue;
        const std::size_t row = static_cast<std::size_t>(s) * k;
        for (std::uint32_t rest = s; rest != 0; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            const std::uint32_t prev = s ^ (1u << v);
            const std::size_t prev_row = static_cast<std::size_t>(prev) * k;
            T acc = ring.zero();
            for (std::uint32_t preds = prev & in_mask[v]; preds != 0; preds &= preds - 1) {
                acc = ring.add(acc, paths[prev_row + std::countr_zero(preds)]);
            }
            paths[row + v] = acc;
        }
    }
    T total = ring.zero();
    const std::size_t last = static_cast<std::size_t>(full) * k;
    for (Vertex v = 1; v < n; ++v) {
        if (d.has_edge(v, 0)) total = ring.add(total, paths[last + (v - 1)]);
    }
    return total;
}

struct WrapRing {
    using value_type = std::uint64_t;
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type add(value_type a, value_type b) const { return a + b; }
};

struct MersenneRing {
    using value_type = std::uint64_t;
    static constexpr std::uint64_t kModulus = (std::uint64_t{1} << 61) - 1;
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type add(value_type a, value_type b) const {
        value_type s = a + b;
        return s >= kModulus ? s - kModulus : s;
    }
};

// Counts are at most (n-1)!. That fits an unsigned 64-bit word for n <= 21;
// beyond, combine residues mod 2^64 and mod 2^61-1 (product > 2^125 > 29!).
BigCount hamilton_count_exact(const Digraph& d) {
    const std::uint64_t r64 = hamilton_dp(d, WrapRing{});
    if (d.n() <= 21) return from_u64(r64);
    const std::uint64_t r61 = hamilton_dp(d, MersenneRing{});
    const BigCount q = from_u64(MersenneRing::kModulus);
    const BigCount two64 = BigCount(1) << 64;
    BigCount inv;
    mpz_invert(inv.get_mpz_t(), two64.get_mpz_t(), q.get_mpz_t());
    BigCount t = (from_u64(r61) - from_u64(r64)) * inv;
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), q.get_mpz_t());
    return from_u64(r64) + two64 * t;
}

}  // namespace

std::string to_decimal(const BigCount& x) { return x.get_str(10); }

BigCount factorial(std::uint32_t n) {
    BigCount r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

BigCount binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    BigCount r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

OneFactor::OneFactor(std::vector<Vertex> image) : image_(std::move(image)) {
    std::vector<bool> hit(image_.size(), false);
    for (Vertex w : image_) {
        if (w >= image_.size() || hit[w]) throw DomainError("1-factor image is not a permutation");
        hit[w] = true;
    }
}

OneFactor OneFactor::identity(std::uint32_t n) {
    std::vector<Vertex> img(n);
    for (Vertex v = 0; v < n; ++v) img[v] = v;
    return OneFactor(std::move(img));
}

OneFactor OneFactor::from_cycle(std::uint32_t n, std::span<const Vertex> cycle) {
    if (cycle.size() != n) throw DomainError("cycle does not span all vertices");
    std::vector<Vertex> img(n, n);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (cycle[i] >= n) throw DomainError("cycle vertex out of range");
        img[cycle[i]] = cycle[(i + 1) % cycle.size()];
    }
    return OneFactor(std::move(img));
}

OneFactor OneFactor::from_cycles(std::uint32_t n, const std::vector<std::vector<Vertex>>& cycles) {
    std::vector<Vertex> img(n, n);
    for (const auto& c : cycles) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] >= n || img[c[i]] != n) throw DomainError("cycles are not a vertex partition");
            img[c[i]] = c[(i + 1) % c.size()];
        }
    }
    return OneFactor(std::move(img));
}

std::vector<std::vector<Vertex>> OneFactor::cycles() const {
    std::vector<std::vector<Vertex>> out;
    std::vector<bool> seen(image_.size(), false);
    for (Vertex s = 0; s < image_.size(); ++s) {
        if (seen[s]) continue;
        auto& c = out.emplace_back();
        for (Vertex v = s; !seen[v]; v = image_[v]) {
            seen[v] = true;
            c.push_back(v);
        }
    }
    return out;
}

std::vector<Edge> OneFactor::edges() const {
    std::vector<Edge> es;
    es.reserve(image_.size());
    for (Vertex v = 0; v < image_.size(); ++v) es.push_back(Edge{v, image_[v]});
    return es;
}

bool OneFactor::is_factor_of(const Digraph& d) const {
    if (d.n() != n()) return false;
    for (Vertex v = 0; v < image_.size(); ++v) {
        if (!d.has_edge(v, image_[v])) return false;
    }
    return true;
}

CycleType cycle_type(const OneFactor& f) {
    CycleType t;
    std::vector<bool> seen(f.n(), false);
    for (Vertex s = 0; s < f.n(); ++s) {
        if (seen[s]) continue;
        ++t.num_cycles;
        if (f[s] == s) ++t.num_loops;
        for (Vertex v = s; !seen[v]; v = f[v]) seen[v] = true;
    }
    return t;
}

BigCount count_hamilton_cycles(const Digraph& d, std::uint32_t cap) {
    check_cap(d, cap, 30, "count_hamilton_cycles");
    if (d.n() < 2) return 0;
    return hamilton_count_exact(d);
}

BigCount count_one_factors(const Digraph& d, std::uint32_t cap) {
    check_cap(d, cap, 26, "count_one_factors");
    const std::uint32_t n = d.n();
    if (n == 0) return 1;

    // col_rows[j]: rows i with a_ij = 1.
    std::vector<std::uint32_t> col_rows(n, 0);
    for (const Edge& e : d.edges()) col_rows[e.to] |= 1u << e.from;

    // Each term is bounded by n^n, so `block` terms fit a signed 128-bit
    // accumulator before it is flushed into the big integer.
    const long double bound = std::pow(static_cast<long double>(n), static_cast<long double>(n));
    const long double room = std::ldexp(1.0L, 125);
    const std::uint64_t block = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::min(room / bound, static_cast<long double>(1ULL << 62))));

    std::vector<std::int64_t> row_sum(n, 0);
    std::uint32_t zero_rows = n;
    std::uint32_t subset = 0;
    __int128 acc = 0;
    std::uint64_t pending = 0;
    BigCount total = 0;
    const std::uint64_t steps = std::uint64_t{1} << n;
    for (std::uint64_t g = 1; g < steps; ++g) {
        const int j = std::countr_zero(g);
        const bool adding = (subset & (1u << j)) == 0;
        subset ^= 1u << j;
        for (std::uint32_t rows = col_rows[j]; rows != 0; rows &= rows - 1) {
            const int i = std::countr_zero(rows);
            if (adding) {
                if (row_sum[i]++ == 0) --zero_rows;
            } else {
                if (--row_sum[i] == 0) ++zero_rows;
            }
        }
        if (zero_rows != 0) continue;
        __int128 prod = 1;
        for (std::uint32_t i = 0; i < n; ++i) prod *= row_sum[i];
        // Sign (-1)^(n - |S|).
        if (((n - std::popcount(subset)) & 1u) != 0) prod = -prod;
        acc += prod;
        if (++pending == block) {
            total += from_i128(acc);
            acc = 0;
            pending = 0;
        }
    }
    total += from_i128(acc);
    return total;
}

FactorEnumeration enumerate_one_factors(const Digraph& d, std::size_t limit) {
    const std::uint32_t n = d.n();
    FactorEnumeration result;
    std::vector<std::vector<Vertex>> succ(n);
    for (Vertex v = 0; v < n; ++v) {
        succ[v] = d.out(v);
        std::sort(succ[v].begin(), succ[v].end());
    }
    std::vector<Vertex> image(n, 0);
    std::vector<bool> used(n, false);
    // Returns false once one factor beyond the limit has been seen.
    std::function<bool(Vertex)> extend = [&](Vertex v) -> bool {
        if (v == n) {
            if (result.factors.size() == limit) {
                result.truncated = true;
                return false;
            }
            result.factors.emplace_back(image);
            return true;
        }
        for (Vertex w : succ[v]) {
            if (used[w]) continue;
            used[w] = true;
            image[v] = w;
            const bool more = extend(v + 1);
            used[w] = false;
            if (!more) return false;
        }
        return true;
    };
    extend(0);
    return result;
}

BigCount derangements(std::uint32_t n) {
    BigCount prev2 = 1;  // D(0)
    if (n == 0) return prev2;
    BigCount prev1 = 0;  // D(1)
    for (std::uint32_t m = 2; m <= n; ++m) {
        BigCount cur = BigCount(m - 1) * (prev1 + prev2);
        prev2 = std::move(prev1);
        prev1 = std::move(cur);
    }
    return prev1;
}

BigCount rencontres(std::uint32_t n, std::uint32_t k) {
    if (k > n) {
        throw DomainError("rencontres: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    }
    return binomial(n, k) * derangements(n - k);
}

}  // namespace hamcount
