// Acceptance run: one PASS/FAIL line per criterion.
//
//   hamcount_acceptance [--only K] [--workers W]

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hamcount/analysis.hpp"
#include "hamcount/digraph.hpp"
#include "hamcount/exact.hpp"
#include "hamcount/frieze.hpp"
#include "hamcount/harness.hpp"
#include "hamcount/pipeline.hpp"
#include "hamcount/process.hpp"
#include "hamcount/rng.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace hamcount;
using nlohmann::json;

namespace {

unsigned g_workers = 1;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Report run(json cfg) {
    ExperimentConfig c = ExperimentConfig::from_json(cfg);
    c.workers = g_workers;
    return run_experiment(c);
}

// Independent Hamilton cycle check against an explicit edge list.
bool verify_cycle(const std::vector<Edge>& host_edges, std::uint32_t n, const std::vector<Vertex>& c) {
    if (c.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (Vertex v : c) {
        if (v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    std::vector<std::vector<Vertex>> out(n);
    for (const Edge& e : host_edges) out[e.from].push_back(e.to);
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex a = c[i], b = c[(i + 1) % n];
        if (a == b || std::find(out[a].begin(), out[a].end(), b) == out[a].end()) return false;
    }
    return true;
}

Outcome c1_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t mismatches = 0, instances = 0;
    for (std::uint32_t n = 5; n <= 8; ++n) {
        for (std::uint64_t s = 0; s < 50; ++s) {
            const Digraph d = gen_binomial(n, 0.5, true, derive_seed(1000 + n, s));
            ++instances;
            if (count_hamilton_cycles(d) != oracle::hamilton_cycles(d)) ++mismatches;
            if (count_one_factors(d) != oracle::permanent(d)) ++mismatches;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {mismatches == 0 && secs < 120,
            fmt("%zu digraphs at n=5..8, %zu mismatches, %.1f s (limit 120 s)", instances, mismatches, secs)};
}

Outcome c2_closed_forms() {
    std::size_t bad = 0;
    for (std::uint32_t n = 1; n <= 12; ++n) {
        mpz_class fact_n = 1;
        for (std::uint32_t k = 2; k <= n; ++k) fact_n *= k;
        const mpz_class fact_n1 = fact_n / n;
        if (n >= 2 && count_hamilton_cycles(complete_digraph(n, false)) != fact_n1) ++bad;
        if (count_one_factors(complete_digraph(n, true)) != fact_n) ++bad;
    }
    return {bad == 0, fmt("K_n Hamilton count (n-1)! and all-ones permanent n! for n<=12: %zu mismatches", bad)};
}

Outcome c3_expectation() {
    const auto t0 = std::chrono::steady_clock::now();
    const Report r = run({{"experiment", "expected_count"}, {"n", 8}, {"p", 0.6}, {"trials", 10000}, {"seed", 3}});
    mpq_class expected = 5040;
    for (int i = 0; i < 8; ++i) expected *= mpq_class(0.6);
    double sum = 0, sum_sq = 0;
    for (const json& t : r.trials) {
        const double x = std::stod(t["count"].get<std::string>());
        sum += x;
        sum_sq += x * x;
    }
    const double T = static_cast<double>(r.trials.size());
    const double mean = sum / T, var = (sum_sq - T * mean * mean) / (T - 1), se = std::sqrt(var / T);
    const double dev = std::abs(mean - expected.get_d());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {r.trials.size() == 10000 && dev <= 3 * se && secs < 300,
            fmt("mean %.4f vs exact %.4f, |diff| = %.2f s.e. (limit 3), %.1f s (limit 300 s)", mean,
                expected.get_d(), dev / se, secs)};
}

Outcome c4_hitting_bracket() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint32_t n = 10000;
    const double ln = std::log(n), lll = std::log(std::log(ln));
    const auto m0 = static_cast<std::uint64_t>(std::floor(n * ln - n * lll));
    const auto m1 = static_cast<std::uint64_t>(std::floor(n * ln + n * lll));
    const Report r = run({{"experiment", "hitting_time"}, {"n", n}, {"trials", 100}, {"seed", 4}});
    std::size_t inside = 0;
    for (const json& t : r.trials) {
        const auto m = t["m_star"].get<std::uint64_t>();
        inside += m0 <= m && m <= m1;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {inside >= 90 && secs < 600,
            fmt("%zu/100 trials with %llu <= m* <= %llu (need 90), %.1f s (limit 600 s)", inside,
                static_cast<unsigned long long>(m0), static_cast<unsigned long long>(m1), secs)};
}

Outcome c5_pipeline() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint32_t n = 2000;
    const double bound = n - 10 * std::log(n) * std::log(n);
    const std::uint64_t master = 5;
    std::size_t verified = 0, low_overlap = 0;
    std::size_t min_overlap = n;
    std::vector<std::string> failures;
    for (std::uint64_t t = 0; t < 20; ++t) {
        const std::uint64_t seed = derive_seed(master, t);
        const HamiltonResult h = run_pipeline(n, seed);
        if (!h.success) {
            failures.push_back(h.phase);
            continue;
        }
        const CoupledProcess cp = sample_coupled_until_hitting(n, seed);
        const std::size_t m_star = hitting_time(cp.loopless);
        const std::vector<Edge> host(cp.loopless.order().begin(), cp.loopless.order().begin() + m_star);
        if (!verify_cycle(host, n, h.cycle)) {
            failures.push_back("verifier");
            continue;
        }
        ++verified;
        min_overlap = std::min(min_overlap, h.overlap);
        if (static_cast<double>(h.overlap) < bound) ++low_overlap;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string fail_list;
    for (const auto& f : failures) fail_list += (fail_list.empty() ? "" : ",") + f;
    return {verified >= 18 && low_overlap == 0 && secs < 1800,
            fmt("%zu/20 verified Hamilton cycles at m* (need 18), min overlap %zu vs bound %.1f, %zu below; "
                "failed phases [%s]; %.1f s (limit 1800 s)",
                verified, min_overlap, bound, low_overlap, fail_list.c_str(), secs)};
}

Outcome c6_subsample() {
    const Report r = run({{"experiment", "subsample_ratio"}, {"n", 6}, {"m", 20}, {"m_prime", 12},
                          {"trials", 1000000}, {"seed", 6}});
    std::uint64_t hits = 0, trials = 0;
    for (const json& t : r.trials) {
        hits += t["contained"].get<std::uint64_t>();
        trials += t["trials"].get<std::uint64_t>();
    }
    const mpq_class exact = oracle::ratio(oracle::binom(14, 6), oracle::binom(20, 12));
    const double p = exact.get_d(), freq = static_cast<double>(hits) / trials;
    const double se = std::sqrt(p * (1 - p) / trials);
    std::size_t bad = 0, checked = 0;
    for (unsigned m = 1; m <= 12; ++m) {
        for (unsigned n = 0; n <= m; ++n) {
            for (unsigned mp = n; mp <= m; ++mp) {
                const auto [hit, all] = oracle::containment_counts(n, m, mp);
                ++checked;
                if (subsample_ratio(n, m, mp) != oracle::ratio(hit, all)) {
                    ++bad;
                }
            }
        }
    }
    return {trials == 1000000 && std::abs(freq - p) <= 3 * se && bad == 0,
            fmt("frequency %.6f vs 3003/125970 = %.6f, |diff| = %.2f s.e. (limit 3); enumeration at m<=12: "
                "%zu/%zu exact matches",
                freq, p, std::abs(freq - p) / se, checked - bad, checked)};
}

Outcome c7_almost_containment() {
    std::size_t bad = 0, checked = 0;
    for (unsigned n = 0; n <= 4; ++n) {
        for (unsigned m0 = n; m0 <= 12; ++m0) {
            for (unsigned m3 = 0; m3 <= m0; ++m3) {
                for (unsigned t = 0; t <= n; ++t) {
                    ++checked;
                    if (almost_containment_prob(n, m0, m3, t) != oracle::almost_containment(n, m0, m3, t)) ++bad;
                }
            }
        }
    }
    return {bad == 0, fmt("%zu admissible (n, m0, m3, t) against subset enumeration, %zu mismatches", checked, bad)};
}

Outcome c8_permutations() {
    const std::uint32_t n = 1000;
    const Report r = run({{"experiment", "permutation_stats"}, {"n", n}, {"trials", 100000}, {"seed", 8}});
    std::vector<std::uint64_t> hist(n + 1, 0);
    double count = 0, sf = 0, sc = 0, sc2 = 0, many = 0;
    for (const json& t : r.trials) {
        count += t["trials"].get<double>();
        sc += t["sum_cycles"].get<double>();
        sc2 += t["sum_cycles_sq"].get<double>();
        many += t["many_cycles"].get<double>();
        for (const auto& [k, v] : t["fixed_histogram"].items()) {
            hist[std::stoul(k)] += v.get<std::uint64_t>();
            sf += std::stod(k) * v.get<double>();
        }
    }
    const double mean_fixed = sf / count;
    const double mean_cycles = sc / count;
    const double se_cycles = std::sqrt((sc2 - count * mean_cycles * mean_cycles) / (count - 1) / count);
    const double h = oracle::harmonic(n);
    const auto ref = oracle::rencontres_pmf(n);
    double tv = 0;
    for (std::uint32_t k = 0; k <= n; ++k) tv += std::abs(hist[k] / count - ref[k].get_d());
    tv /= 2;
    const double frac = many / count;
    const bool ok = count == 100000 && std::abs(mean_fixed - 1) <= 0.01 && tv <= 0.01 &&
                    std::abs(mean_cycles - h) <= 3 * se_cycles && frac <= 0.02;
    return {ok, fmt("mean fixed %.4f (1 +- 0.01), TV %.4f (<= 0.01), mean cycles %.4f vs H_1000 %.4f at %.2f s.e. "
                    "(limit 3), fraction >= 2 log n cycles %.4f (<= 0.02)",
                    mean_fixed, tv, mean_cycles, h, std::abs(mean_cycles - h) / se_cycles, frac)};
}

Outcome c9_chernoff() {
    // Log-space comparison; 1e-12 absorbs rounding in the two logarithms.
    const double slack = 1e-12;
    std::size_t upper_valid = 0, upper_bad = 0, two_valid = 0, two_bad = 0;
    std::string worst;
    double worst_gap = 0;
    for (unsigned n : {10u, 100u, 1000u}) {
        for (double p : {0.01, 0.1, 0.5}) {
            const auto pmf = oracle::binomial_pmf(n, p);
            std::vector<mpq_class> suffix(n + 2, 0);
            for (int k = static_cast<int>(n); k >= 0; --k) suffix[k] = suffix[k + 1] + pmf[k];
            for (unsigned a = 0; a <= n; ++a) {
                const TailBound b = chernoff_upper(a, n, p);
                if (!b.valid) continue;
                ++upper_valid;
                const double exact = oracle::log_rational(suffix[a]);
                if (b.log_value < exact - slack) {
                    ++upper_bad;
                    if (exact - b.log_value > worst_gap) {
                        worst_gap = exact - b.log_value;
                        worst = fmt("n=%u p=%g a=%u: log bound %.2f < log tail %.2f", n, p, a, b.log_value, exact);
                    }
                }
            }
            const mpq_class mean = mpq_class(n) * mpq_class(p);
            for (int step = 0; step <= 150; ++step) {
                const double eps = step / 100.0;
                const TailBound b = chernoff_two_sided(eps, n, p);
                if (!b.valid) continue;
                ++two_valid;
                const mpq_class dev = mpq_class(eps) * mean;
                mpq_class tail = 0;
                for (unsigned k = 0; k <= n; ++k) {
                    const mpq_class diff = mpq_class(k) - mean;
                    if (abs(diff) >= dev) tail += pmf[k];
                }
                if (b.log_value < oracle::log_rational(tail) - slack) ++two_bad;
            }
        }
    }
    return {upper_bad == 0 && two_bad == 0,
            fmt("upper-tail bound below exact tail at %zu/%zu valid points%s%s; two-sided bound below at %zu/%zu",
                upper_bad, upper_valid, worst.empty() ? "" : ", worst ", worst.c_str(), two_bad, two_valid)};
}

Outcome c10_falikman() {
    std::mt19937_64 gen(10);
    std::size_t bad = 0;
    std::string range;
    for (int t = 0; t < 30; ++t) {
        const std::uint32_t n = std::uniform_int_distribution<std::uint32_t>(8, 14)(gen);
        const std::uint32_t r = std::uniform_int_distribution<std::uint32_t>(3, n)(gen);
        const Digraph d = random_regular_bipartite(n, r, gen());
        bool regular = true;
        for (Vertex v = 0; v < n; ++v) regular = regular && d.out_degree(v) == r && d.in_degree(v) == r;
        const mpz_class perm = count_one_factors(d);
        mpz_class lhs = perm, rhs = 1, nn = 1, rr = 1;
        for (std::uint32_t k = 2; k <= n; ++k) rhs *= k;
        for (std::uint32_t k = 0; k < n; ++k) {
            nn *= n;
            rr *= r;
        }
        lhs *= nn;
        rhs *= rr;
        if (!regular || lhs < rhs || !falikman_holds(perm, n, r)) ++bad;
    }
    return {bad == 0, fmt("30 random r-regular bipartite digraphs, n in [8,14], r in [3,n]: %zu below n!(r/n)^n", bad)};
}

Outcome c11_structural() {
    const std::pair<const char*, std::function<std::string(std::uint64_t)>> suites[] = {
        {"rotate", props::rotate_instance},
        {"patch", props::patch_instance},
        {"compress", props::compress_instance},
        {"merge_loops", props::merge_loops_instance},
    };
    std::string detail;
    bool ok = true;
    for (const auto& [name, f] : suites) {
        std::size_t bad = 0;
        std::string first;
        for (std::uint64_t s = 0; s < 1000; ++s) {
            const std::string v = f(derive_seed(11, s));
            if (!v.empty()) {
                if (first.empty()) first = v;
                ++bad;
            }
        }
        ok = ok && bad == 0;
        detail += fmt("%s%s %zu/1000 violations%s%s", detail.empty() ? "" : "; ", name, bad,
                      first.empty() ? "" : " first: ", first.c_str());
    }
    return {ok, detail};
}

// Exhaustive recount used to validate the checker at small n.
std::pair<std::uint64_t, std::uint64_t> recount_discrepancy(const Digraph& d, std::uint64_t m3) {
    const std::uint32_t n = d.n();
    std::vector<std::uint32_t> out(n, 0);
    for (const Edge& e : d.edges()) out[e.from] |= 1u << e.to;
    const double ln = std::log(static_cast<double>(n));
    std::uint64_t tests = 0, violations = 0;
    for (std::uint32_t a = 0; a < (1u << n); ++a) {
        for (std::uint32_t b = 0; b < (1u << n); ++b) {
            const double x1 = __builtin_popcount(a), x2 = __builtin_popcount(b);
            double e = 0;
            for (std::uint32_t rest = a; rest; rest &= rest - 1) e += __builtin_popcount(out[__builtin_ctz(rest)] & b);
            if (x1 * x2 >= 4.0 * n * n / ln) {
                ++tests;
                if (std::abs(e - x1 * x2 * static_cast<double>(m3) / (double(n) * n)) >
                    4 * std::sqrt(x1 * x2 * static_cast<double>(m3) / n)) {
                    ++violations;
                }
            }
            if (x1 <= 3.0 * n / 5 && x2 <= 3.0 * n / 5) {
                ++tests;
                if (e > 4.0 * static_cast<double>(m3) / (5.0 * n) * std::sqrt(x1 * x2)) ++violations;
            }
        }
    }
    return {tests, violations};
}

Outcome c12_pseudorandom() {
    const std::uint32_t n = 500;
    const Constants c = compute_constants(n);
    const std::vector<json> clean = run_indexed(20, g_workers, [&](std::uint64_t t) {
        const std::uint64_t seed = derive_seed(12, t);
        const Digraph d = gen_process_prefix(n, Universe::kLoopful, seed, c.m3).prefix(c.m3);
        const DiscrepancyReport r = edge_discrepancy_check(d, c.m3, 10000, derive_seed(seed, 1));
        return json(r.violations == 0 && r.pairs == 10000);
    });
    std::size_t passing = 0;
    for (const json& j : clean) passing += j.get<bool>();

    std::size_t agree = 0, total = 0;
    for (std::uint32_t small : {8u, 10u, 12u}) {
        for (std::uint64_t s = 0; s < 2; ++s) {
            const std::uint64_t m3 = static_cast<std::uint64_t>(std::ceil(2.0 / 3.0 * small * std::log(small)));
            const Digraph d = gen_process_prefix(small, Universe::kLoopful, derive_seed(120 + small, s), m3).prefix(m3);
            const DiscrepancyReport r = edge_discrepancy_check(d, m3, 0, 0);
            const auto [tests, violations] = recount_discrepancy(d, m3);
            ++total;
            agree += r.exhaustive && r.tests == tests && r.violations == violations;
        }
    }
    return {passing >= 18 && agree == total,
            fmt("n=500, m3=%llu: %zu/20 trials with zero violations over 10^4 pairs (need 18); exhaustive n<=12 "
                "checker matches recount on %zu/%zu instances",
                static_cast<unsigned long long>(c.m3), passing, agree, total)};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    g_workers = std::max(1u, std::thread::hardware_concurrency());
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) {
            g_workers = static_cast<unsigned>(std::max(1, std::atoi(argv[++i])));
        } else {
            std::fprintf(stderr, "usage: %s [--only K] [--workers W]\n", argv[0]);
            return 2;
        }
    }
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"oracle equivalence", c1_oracle_equivalence},
        {"closed forms", c2_closed_forms},
        {"expectation identity", c3_expectation},
        {"hitting-time bracket", c4_hitting_bracket},
        {"pipeline success", c5_pipeline},
        {"subsampling ratio", c6_subsample},
        {"almost-containment sum", c7_almost_containment},
        {"permutation statistics", c8_permutations},
        {"Chernoff dominance", c9_chernoff},
        {"Falikman bound", c10_falikman},
        {"structural suites", c11_structural},
        {"pseudorandomness", c12_pseudorandom},
    };
    if (only < 0 || only > 12) {
        std::fprintf(stderr, "--only expects 1..12\n");
        return 2;
    }
    bool all = true;
    for (int k = 1; k <= 12; ++k) {
        if (only != 0 && k != only) continue;
        Outcome o;
        try {
            o = criteria[k - 1].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("criterion %2d %s  %s: %s\n", k, o.pass ? "PASS" : "FAIL", criteria[k - 1].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
