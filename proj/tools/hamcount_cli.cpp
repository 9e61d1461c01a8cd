// hamcount: command-line front end.
//
// Exit codes: 0 success or all thresholds pass, 1 a threshold or pipeline
// failed, 2 usage or input error, 3 resource cap exceeded.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hamcount/analysis.hpp"
#include "hamcount/edge_list.hpp"
#include "hamcount/errors.hpp"
#include "hamcount/exact.hpp"
#include "hamcount/frieze.hpp"
#include "hamcount/harness.hpp"
#include "hamcount/pipeline.hpp"
#include "hamcount/process.hpp"

using namespace hamcount;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kThresholdFail = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

struct SeedOption {
    std::uint64_t value = 0;
    bool given = false;

    // Synthesizes a seed when none was passed and reports it on stderr.
    std::uint64_t resolve() {
        if (!given) {
            std::random_device rd;
            value = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            given = true;
            std::cerr << "seed: " << value << '\n';
        }
        return value;
    }
};

Digraph read_input(const std::string& path, bool one_indexed) {
    if (path == "-") return read_edge_list(std::cin, one_indexed);
    return read_edge_list_file(path, one_indexed);
}

json constants_json(const Constants& c) {
    return {{"n", c.n},
            {"m0", c.m0},
            {"m1", c.m1},
            {"m3", c.m3},
            {"large_threshold", c.large_threshold},
            {"e1_width", c.e1_width},
            {"isolation_distance", c.isolation_distance},
            {"short_cycle_len", c.short_cycle_len},
            {"degree_window_eps", c.degree_window_eps},
            {"good_loop_cap", c.good_loop_cap},
            {"good_cycle_cap", c.good_cycle_cap},
            {"degree_cap", c.degree_cap}};
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random digraph processes, exact Hamilton-cycle and 1-factor counts, and experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    bool one_indexed = false;
    app.add_flag("--json", as_json, "Machine-readable JSON on stdout");
    app.add_flag("--one-indexed", one_indexed, "Read and write vertex ids as 1..n");

    SeedOption seed;
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](const std::uint64_t& s) { seed.value = s, seed.given = true; }, "RNG seed");
    };

    // generate
    auto* gen = app.add_subcommand("generate", "Emit a random digraph in edge-list format");
    std::uint32_t gen_n = 0;
    double gen_p = -1;
    std::int64_t gen_m = -1;
    bool gen_loops = false;
    bool gen_hitting = false;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Number of vertices")->required();
    auto* opt_p = gen->add_option("--p", gen_p, "Edge probability (binomial model)");
    auto* opt_m = gen->add_option("--m", gen_m, "Edge count (first m edges of the random process)");
    auto* opt_h = gen->add_flag("--hitting", gen_hitting, "Process stopped at its hitting time");
    opt_p->excludes(opt_m)->excludes(opt_h);
    opt_m->excludes(opt_h);
    gen->add_flag("--loops", gen_loops, "Loopful universe");
    gen->add_option("-o,--output", gen_out, "Output file (default stdout)");
    add_seed(gen);

    // hitting-time
    auto* hit = app.add_subcommand("hitting-time", "Sample m* and m*' of a coupled process");
    std::uint32_t hit_n = 0;
    hit->add_option("--n", hit_n, "Number of vertices")->required();
    add_seed(hit);

    // count-hc / count-1f
    auto* chc = app.add_subcommand("count-hc", "Exact number of directed Hamilton cycles");
    auto* c1f = app.add_subcommand("count-1f", "Exact number of 1-factors (permanent)");
    std::string count_in = "-";
    std::uint32_t cap = kDefaultExactCap;
    for (auto* sub : {chc, c1f}) {
        sub->add_option("input", count_in, "Edge-list file, or - for stdin");
        sub->add_option("--cap", cap, "Largest n accepted")->capture_default_str();
    }

    // find-hamilton
    auto* fh = app.add_subcommand("find-hamilton", "Run the 1-factor pipeline on D_{m*}");
    std::uint32_t fh_n = 0;
    PipelineOptions popts;
    std::string edge_mode = "full";
    fh->add_option("--n", fh_n, "Number of vertices")->required();
    fh->add_option("--c-h", popts.c_h, "Overlap constant")->capture_default_str();
    fh->add_option("--relabel-retries", popts.relabel_retries)->capture_default_str();
    fh->add_option("--merge-retries", popts.merge_retries)->capture_default_str();
    fh->add_option("--rotation-budget", popts.close.rotation_budget, "0 means ceil(3 log n)")->capture_default_str();
    fh->add_option("--max-states", popts.close.max_states)->capture_default_str();
    fh->add_option("--edge-mode", edge_mode)->check(CLI::IsMember({"full", "reserved"}))->capture_default_str();
    fh->add_flag("--timings", popts.record_timings, "Record wall-clock per phase");
    add_seed(fh);

    // constants
    auto* con = app.add_subcommand("constants", "Print the edge-count milestones for n");
    std::uint32_t con_n = 0;
    con->add_option("n", con_n, "Number of vertices")->required();

    // check-pseudorandom
    auto* cpr = app.add_subcommand("check-pseudorandom", "Edge-discrepancy check of D'_{m3}");
    std::uint32_t cpr_n = 0;
    std::uint64_t samples = 10000;
    double gate = 4.0;
    std::string cpr_in;
    cpr->add_option("--n", cpr_n, "Number of vertices (sampled instance)");
    cpr->add_option("--input", cpr_in, "Check this edge list instead, with m3 from its n");
    cpr->add_option("--samples", samples)->capture_default_str();
    cpr->add_option("--gate", gate, "Property (1) tested when |X1||X2| >= gate n^2/log n")->capture_default_str();
    add_seed(cpr);

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a harness experiment from a JSON config");
    std::string exp_cfg;
    std::string exp_out;
    std::string exp_csv;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    exp->add_option("config", exp_cfg, "Config JSON file")->required();
    exp->add_option("-o,--output", exp_out, "Write the report here instead of stdout");
    exp->add_option("--csv", exp_csv, "Also write trial records as CSV");
    exp->add_option("--workers", workers, "Parallel trials")->capture_default_str();
    add_seed(exp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            if (gen_n < 2 && (gen_m >= 0 || gen_hitting)) throw DomainError("process models need n >= 2");
            const std::uint64_t s = seed.resolve();
            const Universe u = gen_loops ? Universe::kLoopful : Universe::kLoopless;
            Digraph d;
            if (gen_hitting) {
                const std::size_t m = sample_hitting_time(gen_n, u, s);
                d = gen_process_prefix(gen_n, u, s, m).prefix(m);
            } else if (gen_m >= 0) {
                const auto m = static_cast<std::size_t>(gen_m);
                if (m > universe_size(gen_n, u)) throw DomainError("--m exceeds the number of pairs");
                d = gen_process_prefix(gen_n, u, s, m).prefix(m);
            } else {
                if (gen_p < 0) throw DomainError("generate needs one of --p, --m, --hitting");
                d = gen_binomial(gen_n, gen_p, gen_loops, s);
            }
            if (gen_out.empty()) {
                write_edge_list(std::cout, d, one_indexed);
            } else {
                std::ofstream f(gen_out);
                if (!f) throw FormatError("cannot write " + gen_out);
                write_edge_list(f, d, one_indexed);
            }
            return kOk;
        }

        if (*hit) {
            const Constants c = compute_constants(hit_n);
            const std::uint64_t s = seed.resolve();
            const CoupledProcess cp = sample_coupled_until_hitting(hit_n, s);
            const std::size_t ms = hitting_time(cp.loopless);
            const std::size_t msl = hitting_time(cp.loopful);
            const bool inside = c.m0 <= ms && ms <= c.m1;
            if (as_json) {
                print_json({{"command", "hitting-time"},
                            {"n", hit_n},
                            {"seed", s},
                            {"m_star", ms},
                            {"m_star_loopful", msl},
                            {"m0", c.m0},
                            {"m1", c.m1},
                            {"in_bracket", inside}});
            } else {
                std::cout << "m* = " << ms << "\nm*' = " << msl << "\nm0 = " << c.m0 << "\nm1 = " << c.m1
                          << "\nin bracket: " << (inside ? "yes" : "no") << '\n';
            }
            return kOk;
        }

        if (*chc || *c1f) {
            const Digraph d = read_input(count_in, one_indexed);
            const BigCount x = *chc ? count_hamilton_cycles(d, cap) : count_one_factors(d, cap);
            if (as_json) {
                print_json({{"command", *chc ? "count-hc" : "count-1f"}, {"n", d.n()}, {"count", to_decimal(x)}});
            } else {
                std::cout << to_decimal(x) << '\n';
            }
            return kOk;
        }

        if (*fh) {
            popts.edge_mode = edge_mode == "reserved" ? EdgeMode::kReserved : EdgeMode::kFull;
            const std::uint64_t s = seed.resolve();
            const HamiltonResult r = run_pipeline(fh_n, s, popts);
            const std::uint32_t shift = one_indexed ? 1 : 0;
            if (as_json) {
                json cyc = json::array();
                for (Vertex v : r.cycle) cyc.push_back(v + shift);
                print_json({{"command", "find-hamilton"},
                            {"n", fh_n},
                            {"seed", s},
                            {"success", r.success},
                            {"phase", r.phase},
                            {"reason", r.reason},
                            {"overlap", r.overlap},
                            {"overlap_bound", r.overlap_bound},
                            {"cycle", cyc},
                            {"log", r.log}});
            } else {
                if (r.success) {
                    for (std::size_t k = 0; k < r.cycle.size(); ++k) std::cout << (k ? " " : "") << r.cycle[k] + shift;
                    std::cout << '\n';
                } else {
                    std::cerr << "failed in phase " << r.phase << ": " << r.reason << '\n';
                }
                std::cout << r.log.dump() << '\n';
            }
            return r.success ? kOk : kThresholdFail;
        }

        if (*con) {
            const Constants c = compute_constants(con_n);
            if (as_json) {
                json j = constants_json(c);
                j["command"] = "constants";
                print_json(j);
            } else {
                const json j = constants_json(c);
                for (const auto& [k, v] : j.items()) std::cout << k << " = " << v.dump() << '\n';
            }
            return kOk;
        }

        if (*cpr) {
            Digraph d;
            std::uint64_t s = 0;
            if (!cpr_in.empty()) {
                d = read_input(cpr_in, one_indexed);
                s = seed.given ? seed.value : 0;
            } else {
                if (cpr_n == 0) throw DomainError("check-pseudorandom needs --n or --input");
                s = seed.resolve();
                const Constants c = compute_constants(cpr_n);
                d = gen_process_prefix(cpr_n, Universe::kLoopful, s, c.m3).prefix(c.m3);
            }
            const Constants c = compute_constants(d.n());
            const DiscrepancyReport r = edge_discrepancy_check(d, c.m3, samples, derive_seed(s, 1), gate);
            if (as_json) {
                json j = {{"command", "check-pseudorandom"},
                          {"n", d.n()},
                          {"m3", c.m3},
                          {"exhaustive", r.exhaustive},
                          {"pairs", r.pairs},
                          {"tests", r.tests},
                          {"violations", r.violations},
                          {"pass", r.pass()}};
                if (r.worst) {
                    j["worst"] = {{"size1", r.worst->size1},         {"size2", r.worst->size2},
                                  {"edges", r.worst->edges},         {"property", r.worst->property},
                                  {"statistic", r.worst->statistic}, {"bound", r.worst->bound}};
                }
                print_json(j);
            } else {
                std::cout << (r.exhaustive ? "exhaustive" : "sampled") << ": " << r.pairs << " pairs, " << r.tests
                          << " tests, " << r.violations << " violations\n";
            }
            return r.pass() ? kOk : kThresholdFail;
        }

        if (*exp) {
            std::ifstream f(exp_cfg);
            if (!f) throw FormatError("cannot read " + exp_cfg);
            json j;
            try {
                j = json::parse(f);
            } catch (const json::parse_error& e) {
                throw FormatError(std::string("config is not valid JSON: ") + e.what());
            }
            ExperimentConfig cfg = ExperimentConfig::from_json(j);
            if (seed.given) cfg.seed = seed.value;
            cfg.workers = workers;
            const Report r = run_experiment(cfg);
            const json out = r.to_json();
            if (exp_out.empty()) {
                print_json(out);
            } else {
                std::ofstream o(exp_out);
                if (!o) throw FormatError("cannot write " + exp_out);
                o << out.dump(2) << '\n';
            }
            if (!exp_csv.empty()) {
                std::ofstream o(exp_csv);
                if (!o) throw FormatError("cannot write " + exp_csv);
                r.write_csv(o);
            }
            return r.pass ? kOk : kThresholdFail;
        }
    } catch (const ResourceError& e) {
        std::cerr << "resource cap: " << e.what() << '\n';
        return kResource;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
