#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrw/kernel.hpp"
#include "mrw/rng.hpp"

namespace mrw {

// Markov random walk on a finite state space: transition matrix P of the
// driving chain plus one step kernel K_ij per edge with p_ij > 0.
// Construction does not validate; see validate_model().
class MrwModel {
public:
    MrwModel(std::vector<std::string> labels, std::vector<double> transition,
             std::vector<std::optional<StepKernel>> kernels);

    // Ordinary random walk with i.i.d. increments from `kernel`.
    static MrwModel single_state(StepKernel kernel, std::string label = "0");

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    std::optional<std::size_t> index_of(const std::string& label) const;

    double p(std::size_t i, std::size_t j) const { return transition_[i * size() + j]; }
    bool live(std::size_t i, std::size_t j) const { return p(i, j) > 0.0; }
    const std::optional<StepKernel>& kernel(std::size_t i, std::size_t j) const {
        return kernels_[i * size() + j];
    }
    std::span<const double> transition() const noexcept { return transition_; }
    std::span<const std::optional<StepKernel>> kernels() const noexcept { return kernels_; }

private:
    std::vector<std::string> labels_;
    std::vector<double> transition_;
    std::vector<std::optional<StepKernel>> kernels_;
};

struct ValidationReport {
    std::vector<std::string> failures;
    bool lattice_exact = false;
    std::string lattice_reason;  // why the model is not lattice-exact

    bool passed() const noexcept { return failures.empty(); }
};

ValidationReport validate_model(const MrwModel& m);

// Throws InputError listing every failure when the model is invalid.
void require_valid(const MrwModel& m);

struct StationaryDistribution {
    std::vector<double> pi;
};

// Direct dense solve for |S| <= 64, power iteration on the lazy chain
// (I + P) / 2 above that. Throws SolverError if the residual cannot be
// brought below 1e-10.
StationaryDistribution stationary_distribution(const MrwModel& m);

struct PeriodInfo {
    std::size_t period = 1;
    // classes[r] holds the states whose distance from state 0 is r mod d.
    std::vector<std::vector<std::size_t>> classes;
};

PeriodInfo period(const MrwModel& m);

// Time-reversed model: p#_ij = pi_j p_ji / pi_i, K#_ij = K_ji.
using DualModel = MrwModel;
DualModel dual(const MrwModel& m);

// Same chain, every kernel replaced by the law of the negated step.
MrwModel reflected(const MrwModel& m);

struct NullHomology {
    bool null_homologous = false;
    std::vector<double> potential;  // g with g(state 0) = 0, when null-homologous
    std::string reason;             // violating edge or kernel otherwise
};

NullHomology is_null_homologous(const MrwModel& m);

// Common arithmetic lattice of a lattice-exact model. Every step taken on a
// live edge has the form offset + k * span with k an integer, so
// S_n = index * span + n * offset. offset lies in [0, span) and
// offset / span = offset_num / offset_den exactly, which makes the sign of
// S_n an integer comparison on the fine value offset_den * index + n * offset_num.
struct LatticeGrid {
    double span = 1.0;
    double offset = 0.0;
    std::int64_t offset_num = 0;
    std::int64_t offset_den = 1;
    // shifts[i * |S| + j]: (k, probability) pairs of K_ij in atom order.
    std::vector<std::vector<std::pair<std::int64_t, double>>> shifts;

    double unit() const noexcept { return span / static_cast<double>(offset_den); }
    std::int64_t fine(std::int64_t index, std::int64_t steps) const noexcept {
        return offset_den * index + steps * offset_num;
    }
    std::int64_t fine_step(std::int64_t shift) const noexcept { return offset_den * shift + offset_num; }
};

// nullopt (with a reason) unless every live kernel is Point/Lattice on one
// span with a common rational residue.
std::optional<LatticeGrid> lattice_grid(const MrwModel& m, std::string* reason = nullptr);

struct Trajectory {
    std::size_t initial_state = 0;
    std::vector<std::size_t> states;  // M_0..M_n
    std::vector<double> increments;   // X_1..X_n stored at 0..n-1
    std::vector<double> sums;         // S_0..S_n

    std::size_t steps() const noexcept { return increments.size(); }
};

// Draws (M_k, X_k) given M_{k-1}. One 64-bit draw selects the pair (next
// state, kernel atom) through a per-state alias table; Gaussian edges take
// two more draws for the normal variate.
class PathSampler {
public:
    explicit PathSampler(const MrwModel& m);

    struct Step {
        std::size_t next;
        double value;  // X_k
        double fine;   // X_k in multiples of unit(); integer-valued when lattice_exact()
    };

    Step step(std::size_t state, CounterRng& rng) const noexcept;

    bool lattice_exact() const noexcept { return lattice_exact_; }
    double unit() const noexcept { return unit_; }
    std::size_t size() const noexcept { return first_.size() - 1; }

private:
    struct Outcome {
        std::uint32_t next;
        bool gaussian;
        double value;
        double fine;
        double stddev;
    };

    std::vector<std::size_t> first_;  // outcome range of each state
    std::vector<Outcome> outcomes_;
    std::vector<std::uint64_t> threshold_;
    std::vector<std::uint32_t> alias_;
    bool lattice_exact_ = false;
    double unit_ = 1.0;
};

Trajectory simulate(const MrwModel& m, std::size_t i0, std::size_t n, std::uint64_t seed);

// Same, drawing from an existing stream.
Trajectory simulate(const PathSampler& sampler, std::size_t i0, std::size_t n, CounterRng& rng);

}  // namespace mrw
