#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrw/model.hpp"
#include "mrw/monte_carlo.hpp"

namespace mrw {

struct RhoConfig {
    std::size_t n = 2000;        // steps for (a), (c), (d); cycles for (b)
    std::size_t paths = 10'000;
    std::uint64_t seed = 1;
    double tolerance = 0.03;     // largest admissible pairwise gap
    McOptions options;
};

struct RhoLine {
    std::string name;
    EstimatorResult result;
};

// Estimates of rho from the four equivalent conditions plus the pi-weighted
// Spitzer average:
//   occupation   E N_n^> / n                       (simulated)
//   embedded     (1/n) sum P_i(S_{tau_k(i)} > 0)   (simulated, n cycles)
//   spitzer      (1/n) sum P_i(S_k > 0)            (exact when available)
//   terminal     P_i(S_n > 0)                      (exact when available)
//   spitzer_pi   sum_j pi_j * spitzer average from j
struct RhoReport {
    std::size_t state = 0;
    std::vector<RhoLine> lines;
    double max_gap = 0.0;
    bool pass = false;

    const EstimatorResult& line(const std::string& name) const;
};

RhoReport rho_report(const MrwModel& m, std::size_t i, const RhoConfig& config = {});

}  // namespace mrw
