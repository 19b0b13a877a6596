#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "mrw/model.hpp"

namespace mrw {

struct ExactLimits {
    std::size_t support_cap = 10'000'000;  // DP cells (state x lattice value [x count])
    std::size_t occupation_cap = 300;      // max n for count-tracking DPs
    std::size_t enumeration_cap = 12;      // max n for path enumeration
};

// Exact joint law P_i(M_n = j, S_n = index * span + n * offset) on the dense
// window [min_index, min_index + width).
struct LatticeLaw {
    std::size_t steps = 0;
    std::size_t states = 0;
    double span = 1.0;
    double offset = 0.0;
    std::int64_t offset_num = 0;
    std::int64_t offset_den = 1;
    std::int64_t min_index = 0;
    std::size_t width = 0;
    std::vector<double> mass;  // mass[state * width + (index - min_index)]

    double at(std::size_t state, std::int64_t index) const noexcept;
    double value(std::int64_t index) const noexcept {
        return static_cast<double>(index) * span + static_cast<double>(steps) * offset;
    }
    // Sign of S_n at `index`, decided in exact integer arithmetic.
    int sign(std::int64_t index) const noexcept;
    std::int64_t max_index() const noexcept { return min_index + static_cast<std::int64_t>(width) - 1; }

    double total() const noexcept;
    double prob_positive() const noexcept;
    double prob_positive_at(std::size_t state) const noexcept;
    double prob_zero() const noexcept;
    double prob_negative() const noexcept;
};

LatticeLaw exact_law(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits = {});

double prob_positive(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits = {});
double prob_positive_at_state(const MrwModel& m, std::size_t i0, std::size_t j, std::size_t n,
                              const ExactLimits& limits = {});

// P_i(S_k > 0), P_i(S_k = 0), P_i(S_k < 0) for k = 0..n from one DP sweep.
struct SignProfile {
    std::vector<double> positive;
    std::vector<double> zero;
    std::vector<double> negative;
};

SignProfile sign_profile(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits = {});

// Joint law of (M_n, S_n, N_n^>(x)) where N_n^>(x) counts k in 1..n with
// S_k > x. threshold = 0 gives N_n^>.
struct OccupationLaw {
    std::size_t steps = 0;
    std::size_t states = 0;
    double threshold = 0.0;
    double span = 1.0;
    double offset = 0.0;
    std::int64_t offset_num = 0;
    std::int64_t offset_den = 1;
    std::int64_t min_index = 0;
    std::size_t width = 0;
    std::vector<double> mass;  // [(state * width + (index - min_index)) * (steps + 1) + count]

    double at(std::size_t state, std::int64_t index, std::size_t count) const noexcept;
    // P(N = count), count = 0..steps.
    std::vector<double> count_law() const;
    LatticeLaw lattice_marginal() const;
    double total() const noexcept;
};

OccupationLaw occupation_law(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits = {});

OccupationLaw threshold_occupation_law(const MrwModel& m, std::size_t i0, std::size_t n, double x,
                                       const ExactLimits& limits = {});

// Law of N_n^>(x), indexed by count 0..n.
std::vector<double> threshold_counts_law(const MrwModel& m, std::size_t i0, std::size_t n, double x,
                                         const ExactLimits& limits = {});

// Law of (tau(i), S_tau(i)) on {tau(i) <= horizon} under P_i, plus the
// tail P_i(tau(i) > horizon).
struct ReturnLaw {
    struct Slice {
        std::int64_t min_index = 0;
        std::vector<double> mass;
    };

    std::size_t state = 0;
    std::size_t horizon = 0;
    double span = 1.0;
    double offset = 0.0;
    std::int64_t offset_num = 0;
    std::int64_t offset_den = 1;
    std::vector<Slice> slices;  // slices[t - 1] is the law of the index at tau = t
    double tail = 0.0;

    double at(std::size_t tau, std::int64_t index) const noexcept;
    double prob_tau(std::size_t tau) const noexcept;
    double total() const noexcept;
};

ReturnLaw embedded_return_law(const MrwModel& m, std::size_t i, std::size_t horizon, const ExactLimits& limits = {});

// Largest entrywise gap, compared value-by-value (both laws must live on
// the same lattice).
double max_abs_difference(const ReturnLaw& a, const ReturnLaw& b);
double max_abs_difference(const LatticeLaw& a, const LatticeLaw& b);

// (1/n) sum_{k<=n} P_i(S_{tau_k(i)} > 0) by convolving the cycle law.
// Cycles longer than `horizon` are dropped; neglected_mass bounds the error.
struct EmbeddedPositivity {
    double average = 0.0;
    std::vector<double> per_cycle;  // P_i(S_{tau_k} > 0), k = 1..n
    double neglected_mass = 0.0;
};

EmbeddedPositivity embedded_positivity_average(const MrwModel& m, std::size_t i, std::size_t n,
                                               std::size_t horizon, const ExactLimits& limits = {});

// Strictly ascending ladder epochs of an embedded walk (S_1, S_2, ...), with
// S_0 = 0 implicit. Epochs are 1-based positions in the input.
struct LadderStructure {
    std::vector<std::size_t> epochs;
    std::vector<double> heights;
    std::size_t horizon = 0;

    // k-th epoch, 1-based; nullopt is the Defective sentinel (no further strict
    // ascent within the horizon).
    std::optional<std::size_t> epoch(std::size_t k) const {
        if (k == 0 || k > epochs.size()) return std::nullopt;
        return epochs[k - 1];
    }
};

LadderStructure ladder_epochs(std::span<const double> walk);

struct SpitzerIdentityReport {
    std::size_t n = 0;
    std::size_t state = 0;
    double lhs = 0.0;  // P_i(M_n = i, S_n > 0)
    double rhs = 0.0;  // sum_k (n/k) E_i[(sigma(k)/tau_sigma(k)) 1{tau_sigma(k) = n}]
    double abs_diff = 0.0;
    std::uint64_t paths = 0;
};

SpitzerIdentityReport spitzer_identity(const MrwModel& m, std::size_t i, std::size_t n, const ExactLimits& limits = {});

// Ordinary random walk (|S| = 1): P(sigma(k) = t) for k, t = 0..n. Computed by
// a ladder DP on (records so far, distance below the running maximum).
std::vector<std::vector<double>> ladder_epoch_law(const MrwModel& m, std::size_t n, const ExactLimits& limits = {});

// sum_k (n/k) P(sigma(k) = n) for an ordinary random walk.
double classic_spitzer_rhs(const MrwModel& m, std::size_t n, const ExactLimits& limits = {});

// Exhaustive enumeration of every (state, step) path of length n. Test oracle.
struct BruteForceResult {
    LatticeLaw law;
    std::map<std::tuple<std::size_t, std::int64_t, std::size_t>, double> occupation;  // (state, index, N_n^>)
    std::uint64_t path_count = 0;
    std::vector<std::size_t> branching;  // (next state, atom) choices per state
};

BruteForceResult brute_force_law(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits = {});

// CSV: n,state,lattice_index,value,probability for every nonzero cell.
void write_law_csv(const LatticeLaw& law, const MrwModel& m, const std::filesystem::path& path);

}  // namespace mrw
