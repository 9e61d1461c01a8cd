#include "hamcount/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "hamcount/analysis.hpp"
#include "hamcount/errors.hpp"
#include "hamcount/frieze.hpp"
#include "hamcount/matching.hpp"
#include "hamcount/process.hpp"
#include "hamcount/rng.hpp"

namespace hamcount {

using nlohmann::json;

namespace {

std::string rational_str(const BigRational& q) { return q.get_str(); }

struct Moments {
    double count = 0;
    double sum = 0;
    double sumsq = 0;

    void add(double x) {
        count += 1;
        sum += x;
        sumsq += x * x;
    }
    double mean() const { return count ? sum / count : 0.0; }
    double sd() const {
        if (count < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, (sumsq - count * m * m) / (count - 1)));
    }
    double se() const { return count ? sd() / std::sqrt(count) : 0.0; }
};

json moments_json(const Moments& m) { return {{"mean", m.mean()}, {"sd", m.sd()}, {"se", m.se()}}; }

json base_record(std::uint64_t index, std::uint64_t seed) { return {{"index", index}, {"seed", seed}}; }

// Caps of classify_good evaluated directly, so they exist below n = 16 too.
Constants good_caps(std::uint32_t n) {
    Constants c;
    c.n = n;
    const double ln = std::log(static_cast<double>(n));
    c.good_loop_cap = n >= 2 ? std::log(ln) : -1.0;
    c.good_cycle_cap = 2.0 * ln;
    return c;
}

std::uint64_t chunk_count(const ExperimentConfig& cfg) {
    const std::uint64_t chunk = std::max<std::uint64_t>(cfg.chunk, 1);
    return (cfg.trials + chunk - 1) / chunk;
}

std::uint64_t chunk_size(const ExperimentConfig& cfg, std::uint64_t index) {
    const std::uint64_t chunk = std::max<std::uint64_t>(cfg.chunk, 1);
    return std::min(chunk, cfg.trials - index * chunk);
}

Report finish(const ExperimentConfig& cfg, std::vector<json> trials) {
    Report r;
    r.config = cfg.to_json();
    r.trials = std::move(trials);
    r.aggregate = aggregate_trials(cfg, r.trials);
    r.pass = r.aggregate.value("pass", false);
    return r;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

// Instance for the small-n 1-factor experiments.
Digraph factor_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
    const std::uint32_t n = cfg.n;
    if (cfg.instance == "complete") return complete_digraph(n, true);
    if (cfg.instance == "empty") return Digraph(n, true);
    if (cfg.instance == "loops") {
        Digraph d(n, true);
        for (Vertex v = 0; v < n; ++v) d.add_edge(v, v);
        return d;
    }
    if (cfg.instance == "cycle") {
        Digraph d(n, true);
        for (Vertex v = 0; v < n; ++v) d.add_edge(v, (v + 1) % n);
        return d;
    }
    if (cfg.instance != "process") throw DomainError("unknown instance '" + cfg.instance + "'");
    const CoupledProcess cp = sample_coupled_until_hitting(n, seed);
    if (n >= kMinConstantsN) return build_d_star(cp, compute_constants(n)).graph;
    return cp.loopful.prefix(hitting_time(cp.loopful));
}

}  // namespace

json ExperimentConfig::to_json() const {
    return {
        {"experiment", experiment},
        {"n", n},
        {"p", p},
        {"m", m},
        {"m_prime", m_prime},
        {"model", model},
        {"trials", trials},
        {"seed", seed},
        {"pass_rate", pass_rate},
        {"tolerance_se", tolerance_se},
        {"exact_cap", exact_cap},
        {"chunk", chunk},
        {"count_at_hitting", count_at_hitting},
        {"instance", instance},
        {"relabel", relabel},
        {"enumeration_limit", enumeration_limit},
        {"pipeline",
         {{"c_h", pipeline.c_h},
          {"relabel_retries", pipeline.relabel_retries},
          {"merge_retries", pipeline.merge_retries},
          {"compress_degree", pipeline.compress_degree},
          {"edge_mode", pipeline.edge_mode == EdgeMode::kReserved ? "reserved" : "full"},
          {"rotation_budget", pipeline.close.rotation_budget},
          {"max_states", pipeline.close.max_states},
          {"record_timings", pipeline.record_timings}}},
    };
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw FormatError("experiment config must be a JSON object");
    ExperimentConfig c;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "experiment") c.experiment = v.get<std::string>();
            else if (key == "n") c.n = v.get<std::uint32_t>();
            else if (key == "p") c.p = v.get<double>();
            else if (key == "m") c.m = v.get<std::uint64_t>();
            else if (key == "m_prime") c.m_prime = v.get<std::uint64_t>();
            else if (key == "model") c.model = v.get<std::string>();
            else if (key == "trials") c.trials = v.get<std::uint64_t>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "pass_rate") c.pass_rate = v.get<double>();
            else if (key == "tolerance_se") c.tolerance_se = v.get<double>();
            else if (key == "exact_cap") c.exact_cap = v.get<std::uint32_t>();
            else if (key == "chunk") c.chunk = v.get<std::uint64_t>();
            else if (key == "count_at_hitting") c.count_at_hitting = v.get<bool>();
            else if (key == "instance") c.instance = v.get<std::string>();
            else if (key == "relabel") c.relabel = v.get<bool>();
            else if (key == "enumeration_limit") c.enumeration_limit = v.get<std::uint64_t>();
            else if (key == "workers") c.workers = v.get<unsigned>();
            else if (key == "pipeline") {
                if (!v.is_object()) throw FormatError("'pipeline' must be an object");
                for (const auto& [pk, pv] : v.items()) {
                    if (pk == "c_h") c.pipeline.c_h = pv.get<double>();
                    else if (pk == "relabel_retries") c.pipeline.relabel_retries = pv.get<std::size_t>();
                    else if (pk == "merge_retries") c.pipeline.merge_retries = pv.get<std::size_t>();
                    else if (pk == "compress_degree") c.pipeline.compress_degree = pv.get<std::uint32_t>();
                    else if (pk == "rotation_budget") c.pipeline.close.rotation_budget = pv.get<std::size_t>();
                    else if (pk == "max_states") c.pipeline.close.max_states = pv.get<std::size_t>();
                    else if (pk == "record_timings") c.pipeline.record_timings = pv.get<bool>();
                    else if (pk == "edge_mode") {
                        const auto mode = pv.get<std::string>();
                        if (mode == "full") c.pipeline.edge_mode = EdgeMode::kFull;
                        else if (mode == "reserved") c.pipeline.edge_mode = EdgeMode::kReserved;
                        else throw FormatError("unknown edge_mode '" + mode + "'");
                    } else {
                        throw FormatError("unknown pipeline key '" + pk + "'");
                    }
                }
            } else {
                throw FormatError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad config value: ") + e.what());
    }
    if (c.trials < 1) throw FormatError("trials must be >= 1");
    return c;
}

json Report::to_json() const {
    json j;
    j["version"] = 1;
    j["config"] = config;
    j["trials"] = trials;
    j["aggregate"] = aggregate;
    j["pass"] = pass;
    return j;
}

void Report::write_csv(std::ostream& out) const {
    std::vector<std::string> cols;
    std::set<std::string> seen;
    for (const auto& t : trials) {
        for (const auto& [k, v] : t.items()) {
            if (seen.insert(k).second) cols.push_back(k);
        }
    }
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& t : trials) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out << ',';
            if (!t.contains(cols[i])) continue;
            const json& v = t[cols[i]];
            if (v.is_string()) {
                out << v.get<std::string>();
            } else if (v.is_structured()) {
                std::string s = v.dump();
                std::string q;
                for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                out << '"' << q << '"';
            } else {
                out << v.dump();
            }
        }
        out << '\n';
    }
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"expected_count",     "hitting_time", "subsample_ratio",
                                                   "good_fraction",      "factor_count_bound",
                                                   "pipeline",           "permutation_stats"};
    return names;
}

std::vector<json> run_indexed(std::uint64_t count, unsigned workers, const std::function<json(std::uint64_t)>& f) {
    std::vector<json> out(count);
    const unsigned k = static_cast<unsigned>(std::min<std::uint64_t>(std::max(workers, 1u), count));
    if (k <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < k; ++w) {
        pool.emplace_back([&] {
            for (std::uint64_t i; !failed && (i = next++) < count;) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

BigRational expected_hamilton_binomial(std::uint32_t n, double p) {
    if (!(p >= 0 && p <= 1)) throw DomainError("p must lie in [0, 1]");
    if (n < 2) return 0;
    BigRational q(p);
    BigRational pn = 1;
    for (std::uint32_t k = 0; k < n; ++k) pn *= q;
    return BigRational(factorial(n - 1)) * pn;
}

BigRational expected_hamilton_uniform(std::uint32_t n, std::uint64_t m) {
    if (n < 2) return 0;
    const std::uint64_t big_n = std::uint64_t{n} * (n - 1);
    if (m > big_n) throw DomainError("m exceeds n(n-1)");
    BigCount num = 1;
    BigCount den = 1;
    for (std::uint32_t k = 0; k < n; ++k) {
        num *= BigCount(std::to_string(m >= k ? m - k : 0));
        den *= BigCount(std::to_string(big_n - k));
    }
    BigRational q(factorial(n - 1) * num, den);
    q.canonicalize();
    return q;
}

BigRational subsample_ratio(std::uint64_t n, std::uint64_t m, std::uint64_t m_prime) {
    if (!(n <= m_prime && m_prime <= m)) throw DomainError("subsample_ratio needs n <= m' <= m");
    BigRational q(binomial(static_cast<std::int64_t>(m - n), static_cast<std::int64_t>(m_prime - n)),
                  binomial(static_cast<std::int64_t>(m), static_cast<std::int64_t>(m_prime)));
    q.canonicalize();
    return q;
}

BigRational almost_containment_prob(std::int64_t n, std::int64_t m0, std::int64_t m3, std::int64_t t) {
    const BigCount den = binomial(m0, m3);
    if (den == 0) throw DomainError("C(m0, m3) vanishes");
    BigCount num = 0;
    for (std::int64_t i = 0; i <= t; ++i) num += binomial(n, i) * binomial(m0 - n, m3 - (n - i));
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

BigRational good_permutation_fraction(std::uint32_t n) {
    const Constants caps = good_caps(n);
    // a[m][j]: derangements of m elements with j cycles.
    const auto max_c = static_cast<std::uint32_t>(std::max(0.0, std::ceil(caps.good_cycle_cap)));
    std::vector<std::vector<BigCount>> a(n + 1, std::vector<BigCount>(max_c + 1, 0));
    a[0][0] = 1;
    for (std::uint32_t m = 2; m <= n; ++m) {
        for (std::uint32_t j = 1; j <= max_c; ++j) a[m][j] = (m - 1) * (a[m - 1][j] + a[m - 2][j - 1]);
    }
    BigCount good = 0;
    for (std::uint32_t k = 0; k <= n && k < caps.good_loop_cap; ++k) {
        for (std::uint32_t c = k; c <= max_c && c < caps.good_cycle_cap; ++c) {
            good += binomial(n, k) * a[n - k][c - k];
        }
    }
    BigRational q(good, factorial(n));
    q.canonicalize();
    return q;
}

json aggregate_trials(const ExperimentConfig& cfg, const std::vector<json>& trials) {
    json a;
    const auto total = static_cast<double>(trials.size());
    const std::string& e = cfg.experiment;

    if (e == "expected_count") {
        BigCount sum = 0;
        Moments mo;
        for (const auto& t : trials) {
            const BigCount x(t["count"].get<std::string>());
            sum += x;
            mo.add(x.get_d());
        }
        const BigRational expected = cfg.model == "uniform" ? expected_hamilton_uniform(cfg.n, cfg.m)
                                                            : expected_hamilton_binomial(cfg.n, cfg.p);
        BigRational mean(sum, BigCount(std::to_string(trials.size())));
        mean.canonicalize();
        a = moments_json(mo);
        a["sum"] = sum.get_str();
        a["mean_exact"] = rational_str(mean);
        a["expected"] = expected.get_d();
        a["expected_exact"] = rational_str(expected);
        a["deviation_se"] = mo.se() > 0 ? std::abs(mo.mean() - expected.get_d()) / mo.se() : 0.0;
        a["pass"] = mo.se() > 0 ? std::abs(mo.mean() - expected.get_d()) <= cfg.tolerance_se * mo.se()
                                : mean == expected;
    } else if (e == "hitting_time") {
        const Constants c = compute_constants(cfg.n);
        std::uint64_t inside = 0, inside_loopful = 0, coupled = 0, has_cycle = 0;
        Moments ms, rho;
        for (const auto& t : trials) {
            inside += t["in_bracket"].get<bool>();
            inside_loopful += t["loopful_in_bracket"].get<bool>();
            coupled += t["coupling_ok"].get<bool>();
            ms.add(t["m_star"].get<double>());
            if (t.contains("hc_count")) {
                has_cycle += t["hc_count"].get<std::string>() != "0";
                rho.add(t["rho"].get<double>());
            }
        }
        a["m0"] = c.m0;
        a["m1"] = c.m1;
        a["m_star"] = moments_json(ms);
        a["in_bracket"] = inside;
        a["loopful_in_bracket"] = inside_loopful;
        a["bracket_fraction"] = inside / total;
        a["coupling_ok"] = coupled;
        bool pass = inside >= cfg.pass_rate * total && coupled == trials.size();
        if (cfg.count_at_hitting) {
            a["with_hamilton_cycle"] = has_cycle;
            a["rho"] = moments_json(rho);
            a["hamilton_pass"] = has_cycle >= cfg.pass_rate * total;
        }
        a["pass"] = pass;
    } else if (e == "subsample_ratio") {
        std::uint64_t n_trials = 0, hits = 0;
        for (const auto& t : trials) {
            n_trials += t["trials"].get<std::uint64_t>();
            hits += t["contained"].get<std::uint64_t>();
        }
        const BigRational r = subsample_ratio(cfg.n, cfg.m, cfg.m_prime);
        const double rd = r.get_d();
        const double freq = static_cast<double>(hits) / static_cast<double>(n_trials);
        const double se = std::sqrt(rd * (1 - rd) / static_cast<double>(n_trials));
        a["trials"] = n_trials;
        a["contained"] = hits;
        a["frequency"] = freq;
        a["ratio"] = rd;
        a["ratio_exact"] = rational_str(r);
        a["se"] = se;
        BigRational observed(hits, n_trials);
        observed.canonicalize();
        a["pass"] = se > 0 ? std::abs(freq - rd) <= cfg.tolerance_se * se : observed == r;
    } else if (e == "good_fraction") {
        const BigRational ref = good_permutation_fraction(cfg.n);
        a["reference_good_fraction"] = ref.get_d();
        a["reference_good_fraction_exact"] = rational_str(ref);
        if (!trials.empty() && trials.front().contains("factors")) {
            BigCount factors = 0, good = 0;
            bool truncated = false;
            Moments frac;
            for (const auto& t : trials) {
                const BigCount f(t["factors"].get<std::string>());
                const BigCount g(t["good"].get<std::string>());
                factors += f;
                good += g;
                truncated = truncated || t["truncated"].get<bool>();
                if (f > 0) frac.add(BigRational(g, f).get_d());
            }
            a["mode"] = "enumerate";
            a["factors"] = factors.get_str();
            a["good"] = good.get_str();
            a["truncated"] = truncated;
            a["good_fraction"] = factors > 0 ? BigRational(good, factors).get_d() : 0.0;
            a["per_trial_fraction"] = moments_json(frac);
        } else {
            std::uint64_t found = 0, good = 0;
            std::vector<std::uint64_t> hist(cfg.n + 1, 0);
            for (const auto& t : trials) {
                if (!t["found"].get<bool>()) continue;
                ++found;
                good += t["good"].get<bool>();
                ++hist[t["loops"].get<std::size_t>()];
            }
            const double f = found ? static_cast<double>(good) / found : 0.0;
            a["mode"] = "sample";
            a["found"] = found;
            a["good"] = good;
            a["good_fraction"] = f;
            a["good_fraction_se"] = found ? std::sqrt(f * (1 - f) / found) : 0.0;
            if (found) a["fixed_point_tv"] = total_variation(hist, rencontres_distribution(cfg.n));
        }
        a["pass"] = true;  // informational
    } else if (e == "factor_count_bound") {
        const double ln = std::log(static_cast<double>(cfg.n));
        Moments per_n, removed;
        std::uint64_t no_factor = 0;
        for (const auto& t : trials) {
            if (t["count"].get<std::string>() == "0") ++no_factor;
            else per_n.add(t["log_count_per_n"].get<double>());
            if (t.contains("removed")) removed.add(t["removed"].get<double>());
        }
        a["log_count_per_n"] = moments_json(per_n);
        a["formula"] = std::log(2.0 * ln / (3.0 * std::exp(1.0)));
        a["no_factor"] = no_factor;
        a["removed"] = moments_json(removed);
        const double lln = std::log(ln);
        a["removal_bound"] = lln > 0 ? 4.0 * cfg.n / (lln * lln) : 0.0;
        a["pass"] = true;  // informational
    } else if (e == "pipeline") {
        std::uint64_t ok = 0;
        std::map<std::string, std::uint64_t> failures;
        Moments overlap;
        bool overlap_ok = true;
        for (const auto& t : trials) {
            if (t["success"].get<bool>()) {
                ++ok;
                overlap.add(t["overlap"].get<double>());
                overlap_ok = overlap_ok && t["overlap"].get<double>() >= t["overlap_bound"].get<double>();
            } else {
                ++failures[t["phase"].get<std::string>()];
            }
        }
        a["successes"] = ok;
        a["success_rate"] = ok / total;
        a["failures"] = failures;
        a["overlap"] = moments_json(overlap);
        a["pass"] = ok >= cfg.pass_rate * total && overlap_ok;
    } else if (e == "permutation_stats") {
        double count = 0, sf = 0, sf2 = 0, sc = 0, sc2 = 0;
        std::uint64_t many = 0;
        std::vector<std::uint64_t> hist(cfg.n + 1, 0);
        for (const auto& t : trials) {
            count += t["trials"].get<double>();
            sf += t["sum_fixed"].get<double>();
            sf2 += t["sum_fixed_sq"].get<double>();
            sc += t["sum_cycles"].get<double>();
            sc2 += t["sum_cycles_sq"].get<double>();
            many += t["many_cycles"].get<std::uint64_t>();
            for (const auto& [k, v] : t["fixed_histogram"].items()) hist[std::stoul(k)] += v.get<std::uint64_t>();
        }
        Moments f{count, sf, sf2}, c{count, sc, sc2};
        double harmonic = 0;
        for (std::uint32_t k = 1; k <= cfg.n; ++k) harmonic += 1.0 / k;
        const double tv = total_variation(hist, rencontres_distribution(cfg.n));
        a["fixed_points"] = moments_json(f);
        a["cycles"] = moments_json(c);
        a["harmonic"] = harmonic;
        a["fixed_point_tv"] = tv;
        a["many_cycles_fraction"] = many / count;
        a["pass"] = std::abs(f.mean() - 1.0) <= 0.01 && tv <= 0.01 &&
                    std::abs(c.mean() - harmonic) <= cfg.tolerance_se * c.se() && many / count <= 0.02;
    } else {
        throw DomainError("unknown experiment '" + e + "'");
    }
    return a;
}

Report expt_expected_count(const ExperimentConfig& cfg) {
    require(cfg.n >= 1, "expected_count needs n >= 1");
    if (cfg.n > cfg.exact_cap) {
        throw ResourceError("n = " + std::to_string(cfg.n) + " exceeds exact_cap = " + std::to_string(cfg.exact_cap));
    }
    require(cfg.model == "binomial" || cfg.model == "uniform", "model must be binomial or uniform");
    auto trials = run_indexed(cfg.trials, cfg.workers, [&](std::uint64_t i) {
        const std::uint64_t s = derive_seed(cfg.seed, i);
        const Digraph d = cfg.model == "uniform"
                              ? gen_process_prefix(cfg.n, Universe::kLoopless, s, cfg.m).prefix(cfg.m)
                              : gen_binomial(cfg.n, cfg.p, false, s);
        json t = base_record(i, s);
        t["count"] = to_decimal(count_hamilton_cycles(d, cfg.exact_cap));
        return t;
    });
    return finish(cfg, std::move(trials));
}

Report expt_hitting_time(const ExperimentConfig& cfg) {
    const Constants c = compute_constants(cfg.n);
    if (cfg.count_at_hitting && cfg.n > std::min<std::uint32_t>(20, cfg.exact_cap)) {
        throw ResourceError("count_at_hitting needs n <= 20 and n <= exact_cap");
    }
    auto trials = run_indexed(cfg.trials, cfg.workers, [&](std::uint64_t i) {
        const std::uint64_t s = derive_seed(cfg.seed, i);
        const CoupledProcess cp = sample_coupled_until_hitting(cfg.n, s);
        const std::size_t ms = hitting_time(cp.loopless);
        const std::size_t msl = hitting_time(cp.loopful);
        json t = base_record(i, s);
        t["m_star"] = ms;
        t["m_star_loopful"] = msl;
        t["in_bracket"] = c.m0 <= ms && ms <= c.m1;
        t["loopful_in_bracket"] = c.m0 <= msl && msl <= c.m1;
        t["coupling_ok"] = cp.coupling_holds(std::min({ms, msl, cp.loopless.size()}));
        if (cfg.count_at_hitting) {
            const BigCount x = count_hamilton_cycles(cp.loopless.prefix(ms), cfg.exact_cap);
            t["hc_count"] = to_decimal(x);
            const double nd = cfg.n;
            const double log_ratio = x > 0 ? (std::log(x.get_d()) - std::lgamma(nd + 1)) / nd : -INFINITY;
            t["rho"] = x > 0 ? std::exp(log_ratio) / (std::log(nd) / nd) : 0.0;
        }
        return t;
    });
    return finish(cfg, std::move(trials));
}

Report expt_subsample_ratio(const ExperimentConfig& cfg) {
    require(cfg.n <= cfg.m_prime && cfg.m_prime <= cfg.m, "subsample_ratio needs n <= m' <= m");
    auto trials = run_indexed(chunk_count(cfg), cfg.workers, [&](std::uint64_t i) {
        const std::uint64_t s = derive_seed(cfg.seed, i);
        const std::uint64_t k = chunk_size(cfg, i);
        std::vector<std::uint64_t> pool(cfg.m);
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < k; ++t) {
            Rng rng(derive_seed(s, t));
            std::iota(pool.begin(), pool.end(), 0);
            // Partial Fisher-Yates: pool[0..m') is a uniform m'-subset; H = {0..n-1}.
            std::uint64_t planted = 0;
            for (std::uint64_t j = 0; j < cfg.m_prime; ++j) {
                std::swap(pool[j], pool[j + rng.below(cfg.m - j)]);
                planted += pool[j] < cfg.n;
            }
            hits += planted == cfg.n;
        }
        json t = base_record(i, s);
        t["trials"] = k;
        t["contained"] = hits;
        return t;
    });
    return finish(cfg, std::move(trials));
}

Report expt_good_fraction(const ExperimentConfig& cfg) {
    require(cfg.n >= 2, "good_fraction needs n >= 2");
    const Constants caps = good_caps(cfg.n);
    const bool enumerate = cfg.n <= 16;
    auto trials = run_indexed(cfg.trials, cfg.workers, [&](std::uint64_t i) {
        const std::uint64_t s = derive_seed(cfg.seed, i);
        Rng rng(derive_seed(s, 1));
        Digraph d = factor_instance(cfg, derive_seed(s, 0));
        if (cfg.relabel) d = relabel(d, rng.permutation(cfg.n));
        json t = base_record(i, s);
        if (enumerate) {
            const FactorEnumeration fe = enumerate_one_factors(d, cfg.enumeration_limit);
            std::uint64_t good = 0;
            for (const auto& f : fe.factors) good += classify_good(f, caps);
            t["factors"] = std::to_string(fe.factors.size());
            t["good"] = std::to_string(good);
            t["truncated"] = fe.truncated;
        } else {
            const auto f = find_one_factor(d, rng.next());
            t["found"] = f.has_value();
            if (f) {
                const CycleType ct = cycle_type(*f);
                t["loops"] = ct.num_loops;
                t["cycles"] = ct.num_cycles;
                t["good"] = classify_good(*f, caps);
            }
        }
        return t;
    });
    return finish(cfg, std::move(trials));
}

Report expt_factor_count_bound(const ExperimentConfig& cfg) {
    require(cfg.n >= 2, "factor_count_bound needs n >= 2");
    if (cfg.n > std::min<std::uint32_t>(20, cfg.exact_cap)) {
        throw ResourceError("factor_count_bound needs n <= 20 and n <= exact_cap");
    }
    const double nd = cfg.n;
    const double lln = std::log(std::log(nd));
    const auto m3 = static_cast<std::size_t>(std::ceil(2.0 / 3.0 * nd * std::log(nd)));
    auto trials = run_indexed(cfg.trials, cfg.workers, [&](std::uint64_t i) {
        const std::uint64_t s = derive_seed(cfg.seed, i);
        const Digraph d = factor_instance(cfg, s);
        const BigCount count = count_one_factors(d, cfg.exact_cap);
        json t = base_record(i, s);
        t["edges"] = d.num_edges();
        t["count"] = to_decimal(count);
        t["log_count_per_n"] = count > 0 ? log_of(BigRational(count)) / nd : 0.0;
        if (const auto f = find_one_factor(d, derive_seed(s, 2)); f && lln > 0) {
            // D'_{m3} together with a perfect matching, as in the greedy step.
            Digraph g = d;
            if (cfg.instance == "process") {
                g = gen_process_prefix(cfg.n, Universe::kLoopful, derive_seed(s, 3), m3).prefix(m3);
                for (const Edge& e : f->edges()) g.add_edge(e);
            }
            const Regularized reg = regularize_degrees(g, *f, 4.0 / lln, static_cast<double>(m3) / nd);
            t["removed"] = reg.removed.size();
        }
        return t;
    });
    return finish(cfg, std::move(trials));
}

Report expt_pipeline(const ExperimentConfig& cfg) {
    compute_constants(cfg.n);
    auto trials = run_indexed(cfg.trials, cfg.workers, [&](std::uint64_t i) {
        const std::uint64_t s = derive_seed(cfg.seed, i);
        const HamiltonResult r = run_pipeline(cfg.n, s, cfg.pipeline);
        json t = base_record(i, s);
        t["success"] = r.success;
        t["phase"] = r.phase;
        t["reason"] = r.reason;
        t["overlap"] = r.overlap;
        t["overlap_bound"] = r.overlap_bound;
        t["cycle_length"] = r.cycle.size();
        t["log"] = r.log;
        return t;
    });
    return finish(cfg, std::move(trials));
}

Report expt_permutation_stats(const ExperimentConfig& cfg) {
    require(cfg.n >= 1, "permutation_stats needs n >= 1");
    auto trials = run_indexed(chunk_count(cfg), cfg.workers, [&](std::uint64_t i) {
        const std::uint64_t s = derive_seed(cfg.seed, i);
        const PermutationStats ps = permutation_cycle_stats(cfg.n, chunk_size(cfg, i), s);
        json t = base_record(i, s);
        double sf = 0, sf2 = 0;
        for (std::size_t f = 0; f < ps.fixed_histogram.size(); ++f) {
            sf += double(f) * ps.fixed_histogram[f];
            sf2 += double(f) * double(f) * ps.fixed_histogram[f];
        }
        t["trials"] = ps.trials;
        t["sum_fixed"] = sf;
        t["sum_fixed_sq"] = sf2;
        t["sum_cycles"] = ps.sum_cycles;
        t["sum_cycles_sq"] = ps.sum_cycles_sq;
        t["many_cycles"] = ps.many_cycles;
        json hist = json::object();
        for (std::size_t f = 0; f < ps.fixed_histogram.size(); ++f) {
            if (ps.fixed_histogram[f]) hist[std::to_string(f)] = ps.fixed_histogram[f];
        }
        t["fixed_histogram"] = hist;
        return t;
    });
    return finish(cfg, std::move(trials));
}

Report run_experiment(const ExperimentConfig& cfg) {
    const std::string& e = cfg.experiment;
    if (e == "expected_count") return expt_expected_count(cfg);
    if (e == "hitting_time") return expt_hitting_time(cfg);
    if (e == "subsample_ratio") return expt_subsample_ratio(cfg);
    if (e == "good_fraction") return expt_good_fraction(cfg);
    if (e == "factor_count_bound") return expt_factor_count_bound(cfg);
    if (e == "pipeline") return expt_pipeline(cfg);
    if (e == "permutation_stats") return expt_permutation_stats(cfg);
    throw DomainError("unknown experiment '" + e + "'");
}

}  // namespace hamcount
