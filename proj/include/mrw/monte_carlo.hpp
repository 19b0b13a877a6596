#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "mrw/exact.hpp"
#include "mrw/model.hpp"

namespace mrw {

struct McOptions {
    unsigned threads = 0;           // 0 = hardware concurrency
    bool allow_exact = true;        // use the exact DP route when the model permits
    std::size_t exact_cap = 2000;   // largest n (steps) handed to the exact route
    double step_cap_factor = 1000;  // cycle-clock paths stop after factor * n * E_i tau(i) steps
    double capped_budget = 0.001;   // tolerated fraction of capped paths
    ExactLimits limits;
};

struct EstimatorResult {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    bool exact = false;
    std::size_t capped = 0;  // paths dropped for hitting the step cap
};

// Return epochs tau_k(i), sojourns chi_k(i) and excursion extremes D_k^i
// (largest drop below the cycle's starting level) and H_k^i (largest rise
// above it) of one trajectory. Only completed cycles are listed, so
// returns() is Lambda(n).
struct ReturnStructure {
    std::size_t state = 0;
    std::size_t horizon = 0;
    std::vector<std::size_t> epochs;
    std::vector<std::size_t> sojourns;
    std::vector<double> drops;  // D_k
    std::vector<double> rises;  // H_k

    std::size_t returns() const noexcept { return epochs.size(); }
};

ReturnStructure extract_returns(const Trajectory& t, std::size_t i);

// Mean and standard error (sample sd / sqrt(count)) in index order.
EstimatorResult summarize(std::span<const double> per_path, std::uint64_t seed);

// (1/n) sum_{k<=n} P_i(S_k > 0); n counts steps.
EstimatorResult spitzer_average(const MrwModel& m, std::size_t i, std::size_t n, std::size_t paths,
                                std::uint64_t seed, const McOptions& opts = {});

// (1/n) sum_{k<=n} P_i(S_{tau_k(i)} > 0); n counts cycles. Throws BudgetError
// when more than opts.capped_budget of the paths hit the step cap.
EstimatorResult embedded_spitzer_average(const MrwModel& m, std::size_t i, std::size_t n, std::size_t paths,
                                         std::uint64_t seed, const McOptions& opts = {});

// P_i(S_n > 0) for each n of the grid, in grid order, from shared paths.
std::vector<EstimatorResult> strong_spitzer_curve(const MrwModel& m, std::size_t i, std::span<const std::size_t> n_grid,
                                                  std::size_t paths, std::uint64_t seed, const McOptions& opts = {});

// N_n^> / n for each path.
std::vector<double> occupation_fraction_samples(const MrwModel& m, std::size_t i0, std::size_t n, std::size_t paths,
                                                std::uint64_t seed, const McOptions& opts = {});

// L_n^i = L_n^{i,>} + L_n^{i,<=} over n cycles.
struct BoundaryResult {
    EstimatorResult total;
    EstimatorResult above;  // L_n^{i,>}
    EstimatorResult below;  // L_n^{i,<=}
    bool null_homologous = false;
};

BoundaryResult boundary_occupation(const MrwModel& m, std::size_t i, std::size_t n, std::size_t paths,
                                   std::uint64_t seed, const McOptions& opts = {});

struct CltResult {
    std::vector<double> samples;  // S_n / sqrt(n), one per path
    double theta2 = 0.0;          // pi_i * mean of S_tau(i)^2 over completed cycles
    std::size_t cycles = 0;
};

CltResult clt_check(const MrwModel& m, std::size_t i0, std::size_t n, std::size_t paths, std::uint64_t seed,
                    const McOptions& opts = {});

unsigned resolve_threads(unsigned requested);

// Runs fn(path) for path in [0, paths) on up to `threads` workers, each
// taking a contiguous block.
template <class Fn>
void for_each_path(std::size_t paths, unsigned threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(paths, 1));
    if (workers <= 1) {
        for (std::size_t p = 0; p < paths; ++p) fn(p);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = paths * w / workers;
        const std::size_t end = paths * (w + 1) / workers;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t p = begin; p < end; ++p) fn(p);
        });
    }
}

}  // namespace mrw
