#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace hamcount {

/// SplitMix64 step. Used for seeding and for deriving per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for trial `index` of an experiment run under `master`. Independent of
/// scheduling, so parallel and serial runs see identical streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t s = master ^ (0xd1b54a32d192ed03ULL * (index + 1));
    splitmix64(s);
    return splitmix64(s);
}

/// xoshiro256** (Blackman & Vigna) seeded through SplitMix64.
///
/// All distributions below are implemented here rather than taken from
/// <random>, whose distribution objects are implementation-defined; this keeps
/// every seeded result bit-identical across standard libraries and platforms.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept { return next(); }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) return 0;
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    /// Independent generator seeded from this stream.
    Rng split() noexcept { return Rng(next()); }

    template <typename T>
    void shuffle(std::span<T> xs) noexcept {
        for (std::size_t i = xs.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(xs[i - 1], xs[j]);
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& xs) noexcept { shuffle(std::span<T>(xs)); }

    /// Uniform permutation of [0, n).
    std::vector<std::uint32_t> permutation(std::uint32_t n) {
        std::vector<std::uint32_t> p(n);
        std::iota(p.begin(), p.end(), 0u);
        shuffle(p);
        return p;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
};

}  // namespace hamcount
