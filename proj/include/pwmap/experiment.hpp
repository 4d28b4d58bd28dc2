#pragma once

#include "pwmap/map_spec.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pwmap {

struct experiment_config {
    map_document spec;
    backend_kind backend = backend_kind::float_backend;
    std::vector<std::uint64_t> seeds;
    std::size_t orbit_length = 1'000'000;
    std::size_t burn_in = 1000;
    std::size_t l_max = 64;
    double margin = 1e-9;      // covering margin
    std::size_t depth_m = 6;   // cylinder depth for the discrepancy column
    double dither = 1e-13;     // orbit sampler dither amplitude
    std::size_t bases = 1;     // 1 = post-burn-in point only; k adds k-1 recurrence points
    std::size_t workers = 1;
    double tol = 1e-9;         // extraction residual tolerance
};

struct approximation_row {
    std::uint64_t seed = 0;
    std::size_t l = 0;
    double point = 0;
    std::size_t minimal_period = 0;
    double w1 = 0;
    double discrepancy_m = 0;
    double residual = 0;
};

struct seed_report {
    std::uint64_t seed = 0;
    std::vector<approximation_row> rows; // ascending l, one row per covering time
    bool no_covering_times = false;      // no base produced a usable row
    std::size_t covering_candidates = 0; // covering times seen across all bases
    std::size_t extraction_failures = 0; // candidates lost to extraction errors
    double entropy_rate = 0;             // block-entropy rate of the target itinerary
    bool entropy_warning = false;        // rate <= 0.1: positive-entropy hypothesis doubtful
    std::size_t reseeds = 0;             // sampler restarts
};

// Full pipeline for each seed: sample a long orbit, take its empirical
// measure as the target, scan covering times from the base point(s), extract
// a periodic orbit at each covering time, and score it against the target.
// Seeds run concurrently when workers > 1; results are merged in seed order,
// so output is identical for any worker count.
std::vector<seed_report> run_approximation_experiment(const experiment_config& cfg);

// CSV: header l,p,minimal_period,w1,discrepancy_m,residual; a seed column is
// prepended when the run has several seeds. Reals carry 17 significant digits.
std::string render_report(const std::vector<seed_report>& reports);

void emit_report(const std::vector<seed_report>& reports, const std::string& path);

} // namespace pwmap
