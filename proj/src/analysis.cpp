#include "hamcount/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "hamcount/errors.hpp"
#include "hamcount/rng.hpp"

namespace hamcount {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_of_mpz(const mpz_class& x) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0, 1], got " + std::to_string(p));
}

// Collects test outcomes for one subset pair.
class PairSink {
public:
    explicit PairSink(DiscrepancyReport& r) : r_(r) {}

    void add(std::uint32_t x1, std::uint32_t x2, std::uint64_t e, int property, double stat, double bound) {
        PairRecord rec{x1, x2, e, property, stat, bound, stat <= bound};
        ++r_.tests;
        if (!rec.pass) ++r_.violations;
        if (!r_.worst || stat - bound > r_.worst->statistic - r_.worst->bound) r_.worst = rec;
        if (!r_.exhaustive || (!rec.pass && r_.records.size() < 1000)) r_.records.push_back(rec);
    }

private:
    DiscrepancyReport& r_;
};

// Runs `test(x1, x2, e, sink)` over all subset pairs (n <= 12) or over
// `samples` random pairs whose sizes are uniform on [0, max_size].
template <typename Test>
DiscrepancyReport run_pairs(const Digraph& d, std::uint64_t samples, std::uint64_t seed,
                            std::uint32_t max_size, Test test) {
    const std::uint32_t n = d.n();
    DiscrepancyReport r;
    PairSink sink(r);
    if (n <= kExhaustiveMaxN) {
        r.exhaustive = true;
        std::vector<std::uint32_t> out_mask(n, 0);
        for (const Edge& e : d.edges()) out_mask[e.from] |= 1u << e.to;
        const std::uint32_t full = 1u << n;
        for (std::uint32_t a = 0; a < full; ++a) {
            const auto x1 = static_cast<std::uint32_t>(std::popcount(a));
            if (x1 > max_size) continue;
            for (std::uint32_t b = 0; b < full; ++b) {
                const auto x2 = static_cast<std::uint32_t>(std::popcount(b));
                if (x2 > max_size) continue;
                std::uint64_t e = 0;
                for (std::uint32_t rest = a; rest; rest &= rest - 1) {
                    e += std::popcount(out_mask[std::countr_zero(rest)] & b);
                }
                ++r.pairs;
                test(x1, x2, e, sink);
            }
        }
        return r;
    }

    Rng rng(seed);
    std::vector<Vertex> pool(n);
    std::vector<unsigned char> in2(n, 0);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const auto x1 = static_cast<std::uint32_t>(rng.below(max_size + 1ull));
        const auto x2 = static_cast<std::uint32_t>(rng.below(max_size + 1ull));
        std::iota(pool.begin(), pool.end(), 0u);
        for (std::uint32_t k = 0; k < x2; ++k) std::swap(pool[k], pool[k + rng.below(n - k)]);
        for (std::uint32_t k = 0; k < x2; ++k) in2[pool[k]] = 1;
        std::iota(pool.begin(), pool.end(), 0u);
        for (std::uint32_t k = 0; k < x1; ++k) std::swap(pool[k], pool[k + rng.below(n - k)]);
        std::uint64_t e = 0;
        for (std::uint32_t k = 0; k < x1; ++k) {
            for (Vertex w : d.out(pool[k])) e += in2[w];
        }
        std::fill(in2.begin(), in2.end(), 0);
        ++r.pairs;
        test(x1, x2, e, sink);
    }
    return r;
}

}  // namespace

TailBound chernoff_upper(double a, std::uint64_t n, double p) {
    check_probability(p);
    TailBound b;
    b.threshold = a;
    b.n = n;
    b.p = p;
    const double ex = static_cast<double>(n) * p;
    b.valid = a > 4.0 * ex;
    if (a == 1.0) {
        b.log_value = 0.0;
    } else if (ex == 0.0) {
        b.log_value = a > 1.0 ? -kInf : kInf;
    } else {
        b.log_value = -(a - 1.0) * std::log(a / ex);
    }
    b.value = std::min(1.0, std::exp(b.log_value));
    return b;
}

TailBound chernoff_two_sided(double eps, std::uint64_t n, double p) {
    check_probability(p);
    TailBound b;
    b.threshold = eps;
    b.n = n;
    b.p = p;
    b.valid = eps <= 1.5;
    b.log_value = std::log(2.0) - eps * eps / 3.0 * static_cast<double>(n) * p;
    b.value = std::min(1.0, std::exp(b.log_value));
    return b;
}

double log_of(const BigRational& x) {
    if (sgn(x) <= 0) {
        if (sgn(x) == 0) return -kInf;
        throw DomainError("log of a negative rational");
    }
    return log_of_mpz(x.get_num()) - log_of_mpz(x.get_den());
}

ExactBinomial::ExactBinomial(std::uint32_t n, double p) : n_(n) {
    check_probability(p);
    p_ = BigRational(p);
    const BigCount num = p_.get_num();
    const BigCount den = p_.get_den();
    const BigCount rest = den - num;

    std::vector<BigCount> pow_rest(n + 1);
    pow_rest[0] = 1;
    for (std::uint32_t k = 1; k <= n; ++k) pow_rest[k] = pow_rest[k - 1] * rest;

    weights_.resize(n + 1);
    BigCount pow_num = 1;
    BigCount choose = 1;
    for (std::uint32_t k = 0; k <= n; ++k) {
        weights_[k] = choose * pow_num * pow_rest[n - k];
        pow_num *= num;
        choose = choose * (n - k) / (k + 1);
    }
    mpz_pow_ui(denom_.get_mpz_t(), den.get_mpz_t(), n);

    suffix_.resize(n + 2);
    suffix_[n + 1] = 0;
    for (std::uint32_t k = n + 1; k-- > 0;) suffix_[k] = suffix_[k + 1] + weights_[k];
}

BigRational ExactBinomial::pmf(std::uint32_t k) const {
    if (k > n_) return 0;
    BigRational q(weights_[k], denom_);
    q.canonicalize();
    return q;
}

BigRational ExactBinomial::upper_tail(std::int64_t k) const {
    if (k <= 0) return 1;
    if (k > static_cast<std::int64_t>(n_)) return 0;
    BigRational q(suffix_[static_cast<std::size_t>(k)], denom_);
    q.canonicalize();
    return q;
}

BigRational ExactBinomial::upper_tail_real(double a) const {
    const double c = std::ceil(a);
    if (c <= 0) return 1;
    if (c > n_) return 0;
    return upper_tail(static_cast<std::int64_t>(c));
}

BigRational ExactBinomial::two_sided_tail(double eps) const {
    const BigRational mean = p_ * n_;
    const BigRational target = BigRational(eps) * mean;
    BigCount sum = 0;
    for (std::uint32_t k = 0; k <= n_; ++k) {
        BigRational dev = BigRational(k) - mean;
        if (abs(dev) >= target) sum += weights_[k];
    }
    BigRational q(sum, denom_);
    q.canonicalize();
    return q;
}

double log_binomial_upper_tail(std::uint64_t n, double p, std::int64_t k) {
    check_probability(p);
    if (k <= 0) return 0.0;
    if (static_cast<std::uint64_t>(k) > n) return -kInf;
    if (p == 0.0) return -kInf;
    if (p == 1.0) return 0.0;
    const double nd = static_cast<double>(n);
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    std::vector<double> terms;
    terms.reserve(n - k + 1);
    double peak = -kInf;
    for (std::uint64_t j = static_cast<std::uint64_t>(k); j <= n; ++j) {
        const double jd = static_cast<double>(j);
        const double t = std::lgamma(nd + 1) - std::lgamma(jd + 1) - std::lgamma(nd - jd + 1) + jd * lp +
                         (nd - jd) * lq;
        terms.push_back(t);
        peak = std::max(peak, t);
    }
    double s = 0;
    for (double t : terms) s += std::exp(t - peak);
    return peak + std::log(s);
}

GkReport gk_hypotheses(const Digraph& d, double r, std::uint64_t samples, std::uint64_t seed) {
    if (!(r > 0)) throw DomainError("gk_hypotheses needs r > 0");
    const std::uint32_t n = d.n();
    GkReport g;
    const double lln = n >= 3 ? std::log(std::log(static_cast<double>(n))) : 0.0;
    const double eps = lln > 0 ? 4.0 / lln : kInf;
    g.r_over_loglog = lln > 0 ? r / lln : kInf;

    DegreeReport& dr = g.degrees;
    dr.lo = (1.0 - eps) * r;
    dr.hi = (1.0 + eps) * r;
    dr.min_degree = n ? std::numeric_limits<std::size_t>::max() : 0;
    dr.pass = true;
    for (Vertex v = 0; v < n; ++v) {
        for (std::size_t deg : {d.out_degree(v), d.in_degree(v)}) {
            dr.min_degree = std::min(dr.min_degree, deg);
            dr.max_degree = std::max(dr.max_degree, deg);
            const auto x = static_cast<double>(deg);
            if ((x < dr.lo || x > dr.hi) && dr.pass) {
                dr.pass = false;
                dr.bad_vertex = v;
            }
        }
    }

    const std::uint32_t cap = 3 * n / 5;
    g.discrepancy = run_pairs(d, samples, seed, cap,
                              [&](std::uint32_t x1, std::uint32_t x2, std::uint64_t e, PairSink& sink) {
                                  const double bound = 0.8 * r * std::sqrt(double(x1) * double(x2));
                                  sink.add(x1, x2, e, 2, static_cast<double>(e), bound);
                              });
    return g;
}

DiscrepancyReport edge_discrepancy_check(const Digraph& d, std::uint64_t m3, std::uint64_t samples,
                                         std::uint64_t seed, double gate) {
    const std::uint32_t n = d.n();
    const double nd = n;
    const double md = static_cast<double>(m3);
    const double gate_product = n >= 2 ? gate * nd * nd / std::log(nd) : kInf;
    const std::uint32_t cap2 = 3 * n / 5;
    return run_pairs(d, samples, seed, n, [&](std::uint32_t x1, std::uint32_t x2, std::uint64_t e, PairSink& sink) {
        const double prod = double(x1) * double(x2);
        if (prod >= gate_product) {
            const double stat = std::abs(static_cast<double>(e) - prod * md / (nd * nd));
            sink.add(x1, x2, e, 1, stat, 4.0 * std::sqrt(prod * md / nd));
        }
        if (x1 <= cap2 && x2 <= cap2) {
            sink.add(x1, x2, e, 2, static_cast<double>(e), 4.0 * md / (5.0 * nd) * std::sqrt(prod));
        }
    });
}

double gk_lower_bound(std::uint32_t n, double r, double eps) {
    return static_cast<double>(n) * (std::log((1.0 - eps) * r) - 1.0);
}

double falikman_bound(std::uint32_t n, std::uint32_t r) {
    if (r == 0 || r > n) throw DomainError("falikman_bound needs 0 < r <= n");
    return log_of_mpz(factorial(n)) + n * std::log(static_cast<double>(r) / n);
}

bool falikman_holds(const BigCount& perm, std::uint32_t n, std::uint32_t r) {
    if (r == 0 || r > n) throw DomainError("falikman_holds needs 0 < r <= n");
    BigCount rn;
    BigCount nn;
    mpz_ui_pow_ui(rn.get_mpz_t(), r, n);
    mpz_ui_pow_ui(nn.get_mpz_t(), n, n);
    return perm * nn >= factorial(n) * rn;
}

Digraph random_regular_bipartite(std::uint32_t n, std::uint32_t r, std::uint64_t seed) {
    if (r > n) throw DomainError("random_regular_bipartite needs r <= n");
    Rng rng(seed);
    const auto left = rng.permutation(n);
    const auto right = rng.permutation(n);
    std::vector<Edge> edges;
    edges.reserve(std::size_t{n} * r);
    EdgeSet set;
    for (Vertex v = 0; v < n; ++v) {
        for (std::uint32_t k = 0; k < r; ++k) {
            const Edge e{left[v], right[(v + k) % n]};
            edges.push_back(e);
            set.insert(e);
        }
    }
    if (edges.size() >= 2) {
        const std::uint64_t switches = 10ull * n * r;
        for (std::uint64_t s = 0; s < switches; ++s) {
            const std::size_t i = rng.below(edges.size());
            const std::size_t j = rng.below(edges.size());
            const Edge a = edges[i];
            const Edge b = edges[j];
            if (a.from == b.from || a.to == b.to) continue;
            const Edge na{a.from, b.to};
            const Edge nb{b.from, a.to};
            if (set.contains(na) || set.contains(nb)) continue;
            set.erase(a);
            set.erase(b);
            set.insert(na);
            set.insert(nb);
            edges[i] = na;
            edges[j] = nb;
        }
    }
    return Digraph(n, true, edges);
}

Regularized regularize_degrees(const Digraph& g, const OneFactor& m, double eps, double target) {
    const std::uint32_t n = g.n();
    if (m.n() != n || !m.is_factor_of(g)) throw PreconditionError("matching is not a 1-factor of the instance");
    const double lo = target * (1.0 - eps);
    const double hi = target * (1.0 + eps);
    auto bad = [&](std::size_t deg) {
        const auto x = static_cast<double>(deg);
        return x < lo || x > hi;
    };

    std::vector<Vertex> pre(n);
    for (Vertex v = 0; v < n; ++v) pre[m[v]] = v;
    std::vector<std::size_t> outdeg(n);
    std::vector<std::size_t> indeg(n);
    for (Vertex v = 0; v < n; ++v) {
        outdeg[v] = g.out_degree(v);
        indeg[v] = g.in_degree(v);
    }

    Regularized out;
    out.left = VertexSet(n, true);
    out.right = VertexSet(n, true);
    for (;;) {
        std::optional<Vertex> x;
        for (Vertex v = 0; v < n && !x; ++v) {
            if (out.left.contains(v) && bad(outdeg[v])) x = v;
        }
        for (Vertex w = 0; w < n && !x; ++w) {
            if (out.right.contains(w) && bad(indeg[w])) x = pre[w];
        }
        if (!x) break;
        const Vertex u = *x;
        const Vertex w = m[u];
        out.left.erase(u);
        out.right.erase(w);
        out.removed.push_back(Edge{u, w});
        for (Vertex y : g.out(u)) {
            if (out.right.contains(y)) --indeg[y];
        }
        for (Vertex y : g.in(w)) {
            if (out.left.contains(y)) --outdeg[y];
        }
    }

    out.graph = Digraph(n, g.allow_loops());
    for (const Edge& e : g.edges()) {
        if (out.left.contains(e.from) && out.right.contains(e.to)) out.graph.add_edge(e);
    }
    return out;
}

namespace {

void check_permutation(const std::vector<Vertex>& sigma, std::uint32_t n) {
    if (sigma.size() != n) throw DomainError("permutation has the wrong size");
    std::vector<unsigned char> seen(n, 0);
    for (Vertex v : sigma) {
        if (v >= n || seen[v]) throw DomainError("not a permutation of [0, n)");
        seen[v] = 1;
    }
}

}  // namespace

Digraph relabel(const Digraph& d, const std::vector<Vertex>& sigma) {
    check_permutation(sigma, d.n());
    std::vector<Edge> edges;
    edges.reserve(d.num_edges());
    bool loops = d.allow_loops();
    for (const Edge& e : d.edges()) {
        edges.push_back(Edge{e.from, sigma[e.to]});
        loops = loops || edges.back().is_loop();
    }
    return Digraph(d.n(), loops, edges);
}

OneFactor relabel_factor(const OneFactor& f, const std::vector<Vertex>& sigma) {
    check_permutation(sigma, f.n());
    std::vector<Vertex> image(f.n());
    for (Vertex v = 0; v < f.n(); ++v) image[v] = sigma[f[v]];
    return OneFactor(std::move(image));
}

std::vector<Vertex> inverse_permutation(const std::vector<Vertex>& sigma) {
    check_permutation(sigma, static_cast<std::uint32_t>(sigma.size()));
    std::vector<Vertex> inv(sigma.size());
    for (Vertex v = 0; v < sigma.size(); ++v) inv[sigma[v]] = v;
    return inv;
}

PermutationStats permutation_cycle_stats(std::uint32_t n, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw DomainError("permutation_cycle_stats needs trials >= 1");
    PermutationStats s;
    s.n = n;
    s.trials = trials;
    s.fixed_histogram.assign(n + 1, 0);
    const double many = 2.0 * std::log(static_cast<double>(std::max<std::uint32_t>(n, 1)));
    double sf = 0, sf2 = 0, sc = 0, sc2 = 0;
    std::vector<unsigned char> seen(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, t));
        const auto perm = rng.permutation(n);
        std::uint32_t fixed = 0;
        std::uint32_t cycles = 0;
        std::fill(seen.begin(), seen.end(), 0);
        for (Vertex v = 0; v < n; ++v) {
            if (perm[v] == v) ++fixed;
            if (seen[v]) continue;
            ++cycles;
            for (Vertex w = v; !seen[w]; w = perm[w]) seen[w] = 1;
        }
        ++s.fixed_histogram[fixed];
        sf += fixed;
        sf2 += double(fixed) * fixed;
        sc += cycles;
        sc2 += double(cycles) * cycles;
        if (cycles >= many) ++s.many_cycles;
    }
    const auto td = static_cast<double>(trials);
    s.sum_cycles = sc;
    s.sum_cycles_sq = sc2;
    s.mean_fixed = sf / td;
    s.mean_cycles = sc / td;
    if (trials > 1) {
        s.sd_fixed = std::sqrt(std::max(0.0, (sf2 - td * s.mean_fixed * s.mean_fixed) / (td - 1)));
        s.sd_cycles = std::sqrt(std::max(0.0, (sc2 - td * s.mean_cycles * s.mean_cycles) / (td - 1)));
    }
    s.many_cycles_fraction = static_cast<double>(s.many_cycles) / td;
    return s;
}

std::vector<double> rencontres_distribution(std::uint32_t n) {
    std::vector<BigCount> der(n + 1);
    der[0] = 1;
    if (n >= 1) der[1] = 0;
    for (std::uint32_t m = 2; m <= n; ++m) der[m] = (m - 1) * (der[m - 1] + der[m - 2]);
    const BigCount nf = factorial(n);
    std::vector<double> out(n + 1);
    BigCount choose = 1;
    for (std::uint32_t k = 0; k <= n; ++k) {
        BigRational q(choose * der[n - k], nf);
        q.canonicalize();
        out[k] = q.get_d();
        choose = choose * (n - k) / (k + 1);
    }
    return out;
}

double total_variation(const std::vector<std::uint64_t>& hist, const std::vector<double>& ref) {
    double total = 0;
    for (auto h : hist) total += static_cast<double>(h);
    if (total == 0) throw DomainError("empty histogram");
    const std::size_t len = std::max(hist.size(), ref.size());
    double tv = 0;
    for (std::size_t k = 0; k < len; ++k) {
        const double a = k < hist.size() ? static_cast<double>(hist[k]) / total : 0.0;
        const double b = k < ref.size() ? ref[k] : 0.0;
        tv += std::abs(a - b);
    }
    return tv / 2;
}

}  // namespace hamcount
