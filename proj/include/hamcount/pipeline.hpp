#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "hamcount/frieze.hpp"
#include "hamcount/process.hpp"
#include "hamcount/rotation.hpp"

namespace hamcount {

enum class EdgeMode {
    kFull,      ///< patching and rotations both use all of D_{m*}
    kReserved,  ///< LARGE-LARGE edges at loopless positions [m3, m*) split alternately between them
};

struct PipelineOptions {
    double c_h = 10.0;                 ///< overlap must be >= n - c_h log^2 n
    std::size_t relabel_retries = 25;  ///< attempts at a good 1-factor
    std::size_t merge_retries = 5;     ///< connecting edges tried per phase-3 merge
    std::uint32_t compress_degree = 2; ///< compress non-LARGE vertices with min host degree <= this
    EdgeMode edge_mode = EdgeMode::kFull;
    CloseOptions close;
    bool record_timings = false;       ///< wall-clock per phase in the log (breaks byte-identity)
};

struct HamiltonResult {
    bool success = false;
    Cycle cycle;                 ///< verified Hamilton cycle of D_{m*} when success
    std::size_t overlap = 0;     ///< edges shared with the initial good 1-factor
    double overlap_bound = 0;    ///< n - c_h log^2 n
    std::string phase;           ///< failing phase, empty on success
    std::string reason;
    nlohmann::json log;          ///< phase log
};

/// Finds a Hamilton cycle of the loopless prefix at m* by the 1-factor route:
/// D_*' and E1, a good 1-factor, loop merging, compression, greedy patching,
/// rotation merges into the longest cycle, forbidden-edge elimination and
/// decompression. Failures name the phase.
HamiltonResult find_hamilton(const CoupledProcess& cp, const Constants& c, std::uint64_t seed,
                             const PipelineOptions& opts = {});

/// Samples the coupled process for n vertices from `seed` and runs find_hamilton.
HamiltonResult run_pipeline(std::uint32_t n, std::uint64_t seed, const PipelineOptions& opts = {});

}  // namespace hamcount
