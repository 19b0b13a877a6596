#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mrw {

struct PointKernel {
    double value = 0.0;
};

// Atoms at offset + k * span with probability pmf[k]. The atom order is part
// of the kernel: samplers walk atoms in this order, and negation keeps it, so
// a negated model driven by the same random stream produces the mirrored path.
struct LatticeKernel {
    double span = 1.0;
    double offset = 0.0;
    std::vector<std::pair<std::int64_t, double>> pmf;
};

struct GaussianKernel {
    double mean = 0.0;
    double stddev = 1.0;
};

using StepKernel = std::variant<PointKernel, LatticeKernel, GaussianKernel>;

struct Atom {
    double value;
    double probability;
};

// Empty string iff the kernel is well formed.
std::string kernel_defect(const StepKernel& k);

bool has_finite_support(const StepKernel& k);

// Atoms of a finite-support kernel in sampling order. Empty for Gaussian.
std::vector<Atom> kernel_atoms(const StepKernel& k);

// Value of a kernel that is a point mass (Point, or Lattice with one atom).
std::optional<double> point_value(const StepKernel& k);

double kernel_mean(const StepKernel& k);

// Law of -X for X ~ k.
StepKernel negated(const StepKernel& k);

bool kernels_close(const StepKernel& a, const StepKernel& b, double tol);

std::string describe(const StepKernel& k);

}  // namespace mrw
