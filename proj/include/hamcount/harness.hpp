#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hamcount/exact.hpp"
#include "hamcount/pipeline.hpp"

namespace hamcount {

/// Experiment parameters. Every field is echoed in the report except
/// `workers`, which cannot change results.
struct ExperimentConfig {
    std::string experiment;
    std::uint32_t n = 0;
    double p = 0.5;
    std::uint64_t m = 0;
    std::uint64_t m_prime = 0;
    std::string model = "binomial";   ///< expected_count: binomial | uniform
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    double pass_rate = 0.9;           ///< fraction of trials an a.a.s. claim must meet
    double tolerance_se = 3.0;        ///< standard errors allowed for mean comparisons
    std::uint32_t exact_cap = kDefaultExactCap;
    std::uint64_t chunk = 10000;      ///< trials per record for cheap Bernoulli experiments
    bool count_at_hitting = false;    ///< hitting_time: exact Hamilton count at m*
    std::string instance = "process"; ///< good_fraction / factor_count_bound instance
    bool relabel = true;              ///< good_fraction: apply a uniform relabel first
    std::uint64_t enumeration_limit = 1000000;
    PipelineOptions pipeline;
    unsigned workers = 1;

    nlohmann::json to_json() const;
    /// Throws FormatError on unknown keys or wrong types.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct Report {
    nlohmann::json config;
    std::vector<nlohmann::json> trials;
    nlohmann::json aggregate;
    bool pass = false;

    nlohmann::json to_json() const;
    /// One row per trial record; nested values are written as JSON text.
    void write_csv(std::ostream& out) const;
};

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Runs f(0..count-1) on up to `workers` threads; results stay index-ordered.
std::vector<nlohmann::json> run_indexed(std::uint64_t count, unsigned workers,
                                        const std::function<nlohmann::json(std::uint64_t)>& f);

/// Aggregates from trial records alone, so a report can be re-checked.
nlohmann::json aggregate_trials(const ExperimentConfig& cfg, const std::vector<nlohmann::json>& trials);

/// Dispatches on cfg.experiment. DomainError for unknown names or bad
/// parameters, ResourceError past the exact-counting caps.
Report run_experiment(const ExperimentConfig& cfg);

Report expt_expected_count(const ExperimentConfig& cfg);
Report expt_hitting_time(const ExperimentConfig& cfg);
Report expt_subsample_ratio(const ExperimentConfig& cfg);
Report expt_good_fraction(const ExperimentConfig& cfg);
Report expt_factor_count_bound(const ExperimentConfig& cfg);
Report expt_pipeline(const ExperimentConfig& cfg);
Report expt_permutation_stats(const ExperimentConfig& cfg);

/// (n-1)! p^n for the binomial model; (n-1)! (m)_n / (N)_n for the uniform
/// model, N = n(n-1), with (x)_n the falling factorial.
BigRational expected_hamilton_binomial(std::uint32_t n, double p);
BigRational expected_hamilton_uniform(std::uint32_t n, std::uint64_t m);

/// C(m-n, m'-n) / C(m, m'). DomainError unless n <= m' <= m.
BigRational subsample_ratio(std::uint64_t n, std::uint64_t m, std::uint64_t m_prime);

/// sum_{i<=t} C(n,i) C(m0-n, m3-(n-i)) / C(m0, m3).
BigRational almost_containment_prob(std::int64_t n, std::int64_t m0, std::int64_t m3, std::int64_t t);

/// Exact fraction of permutations of [n] with fewer than log log n fixed
/// points and fewer than 2 log n cycles.
BigRational good_permutation_fraction(std::uint32_t n);

}  // namespace hamcount
