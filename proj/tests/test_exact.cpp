#include <gtest/gtest.h>

#include <random>

#include "hamcount/analysis.hpp"
#include "hamcount/digraph.hpp"
#include "hamcount/errors.hpp"
#include "hamcount/exact.hpp"
#include "hamcount/matching.hpp"
#include "oracles.hpp"

using namespace hamcount;

namespace {

Digraph directed_cycle(std::uint32_t n) {
    Digraph d(n, false);
    for (Vertex v = 0; v < n; ++v) d.add_edge(v, (v + 1) % n);
    return d;
}

Digraph loops_only(std::uint32_t n) {
    Digraph d(n, true);
    for (Vertex v = 0; v < n; ++v) d.add_edge(v, v);
    return d;
}

}  // namespace

TEST(CountHamilton, Examples) {
    EXPECT_EQ(count_hamilton_cycles(complete_digraph(4, false)), 6);
    EXPECT_EQ(count_hamilton_cycles(directed_cycle(7)), 1);
    EXPECT_EQ(count_hamilton_cycles(Digraph(1, true)), 0);
    EXPECT_EQ(count_hamilton_cycles(complete_digraph(2, false)), 1);
    EXPECT_EQ(count_hamilton_cycles(complete_digraph(22, false)), factorial(21));  // past 2^64
    EXPECT_EQ(count_hamilton_cycles(complete_digraph(6, true)), 120);
}

TEST(CountHamilton, CapIsResourceError) {
    try {
        count_hamilton_cycles(complete_digraph(10, false), 9);
        FAIL();
    } catch (const ResourceError& e) {
        EXPECT_NE(std::string(e.what()).find("9"), std::string::npos);
    }
    EXPECT_THROW(count_one_factors(complete_digraph(10, false), 9), ResourceError);
}

TEST(CountHamilton, MatchesBruteForce) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Digraph d = gen_binomial(8, 0.5, false, s);
        EXPECT_EQ(count_hamilton_cycles(d), oracle::hamilton_cycles(d)) << s;
    }
}

TEST(CountOneFactors, Examples) {
    EXPECT_EQ(count_one_factors(loops_only(9)), 1);
    EXPECT_EQ(count_one_factors(complete_digraph(6, true)), 720);
    EXPECT_EQ(count_one_factors(complete_digraph(4, false)), 9);
    EXPECT_EQ(count_one_factors(Digraph(0, false)), 1);
    EXPECT_EQ(count_one_factors(Digraph(3, false)), 0);
}

TEST(CountOneFactors, MatchesBruteForce) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Digraph d = gen_binomial(7, 0.5, true, s);
        EXPECT_EQ(count_one_factors(d), oracle::permanent(d)) << s;
    }
}

TEST(Counts, Invariants) {
    std::mt19937_64 gen(99);
    for (std::uint64_t s = 0; s < 30; ++s) {
        Digraph d = gen_binomial(7, 0.4, true, s);
        const BigCount hc = count_hamilton_cycles(d);
        EXPECT_LE(hc, count_one_factors(d.without_loops()));

        const auto sigma = oracle::random_permutation(7, gen);
        EXPECT_EQ(count_one_factors(relabel(d, sigma)), count_one_factors(d));

        const BigCount f = count_one_factors(d);
        for (Vertex u = 0; u < 7; ++u) {
            for (Vertex v = 0; v < 7; ++v) {
                if (d.has_edge(u, v)) continue;
                Digraph e = d;
                e.add_edge(u, v);
                EXPECT_GE(count_one_factors(e), f);
                EXPECT_GE(count_hamilton_cycles(e), hc);
            }
        }
    }
}

TEST(Enumerate, Examples) {
    const FactorEnumeration id = enumerate_one_factors(loops_only(5), 10);
    ASSERT_EQ(id.factors.size(), 1u);
    EXPECT_EQ(id.factors[0], OneFactor::identity(5));

    const FactorEnumeration k3 = enumerate_one_factors(complete_digraph(3, true), 6);
    EXPECT_EQ(k3.factors.size(), 6u);
    EXPECT_FALSE(k3.truncated);
    EXPECT_EQ(count_one_factors(complete_digraph(3, true)), 6);

    Digraph both(3, false);
    for (Vertex v = 0; v < 3; ++v) {
        both.add_edge(v, (v + 1) % 3);
        both.add_edge((v + 1) % 3, v);
    }
    EXPECT_EQ(enumerate_one_factors(both, 100).factors.size(), 2u);

    const FactorEnumeration cut = enumerate_one_factors(complete_digraph(4, true), 5);
    EXPECT_EQ(cut.factors.size(), 5u);
    EXPECT_TRUE(cut.truncated);
}

TEST(Enumerate, DistinctValidMatchesCount) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Digraph d = gen_binomial(7, 0.5, true, s);
        const FactorEnumeration e = enumerate_one_factors(d, 100000);
        EXPECT_EQ(BigCount(static_cast<unsigned long>(e.factors.size())), count_one_factors(d));
        for (std::size_t i = 0; i < e.factors.size(); ++i) {
            EXPECT_TRUE(e.factors[i].is_factor_of(d));
            if (i) EXPECT_LT(e.factors[i - 1].image(), e.factors[i].image());
        }
    }
}

TEST(CycleType, Examples) {
    EXPECT_EQ(cycle_type(OneFactor::identity(5)), (CycleType{5, 5}));
    const std::vector<Vertex> five = {0, 1, 2, 3, 4};
    EXPECT_EQ(cycle_type(OneFactor::from_cycle(5, five)), (CycleType{0, 1}));
    EXPECT_EQ(cycle_type(OneFactor::from_cycles(6, {{0}, {1, 2}, {3, 4, 5}})), (CycleType{1, 3}));
    EXPECT_THROW(OneFactor(std::vector<Vertex>{0, 0, 1}), DomainError);
}

TEST(Rencontres, Examples) {
    EXPECT_EQ(rencontres(7, 7), 1);
    EXPECT_EQ(rencontres(3, 1), 3);
    EXPECT_EQ(derangements(4), 9);
    EXPECT_THROW(rencontres(3, 4), DomainError);
    for (std::uint32_t n : {1u, 5u, 10u, 30u}) {
        BigCount total = 0, weighted = 0;
        for (std::uint32_t k = 0; k <= n; ++k) {
            total += rencontres(n, k);
            weighted += k * rencontres(n, k);
        }
        EXPECT_EQ(total, factorial(n));
        EXPECT_EQ(weighted, factorial(n));
    }
    EXPECT_EQ(factorial(10), 3628800);
}

TEST(FindOneFactor, Examples) {
    const auto f = find_one_factor(complete_digraph(6, true), 1);
    ASSERT_TRUE(f);
    EXPECT_TRUE(f->is_factor_of(complete_digraph(6, true)));

    Digraph sink = complete_digraph(5, false);
    Digraph no_out(5, false);
    for (const Edge& e : sink.edges()) {
        if (e.from != 2) no_out.add_edge(e);
    }
    EXPECT_FALSE(find_one_factor(no_out, 1));
}

TEST(FindOneFactor, AgreesWithBruteForce) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Digraph d = gen_binomial(8, 0.2, true, s);
        const auto f = find_one_factor(d, s);
        EXPECT_EQ(f.has_value(), oracle::permanent(d) > 0) << s;
        if (f) EXPECT_TRUE(f->is_factor_of(d));
    }
}
