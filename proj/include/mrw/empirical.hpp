#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "mrw/arcsine.hpp"

namespace mrw {

struct NormalLaw {
    double mean = 0.0;
    double variance = 1.0;

    double cdf(double x) const;
    double cdf_left(double x) const { return cdf(x); }
};

using ReferenceLaw = std::variant<ArcsineLaw, NormalLaw>;

double reference_cdf(const ReferenceLaw& law, double x);

// Distribution with finitely many atoms, either from equally weighted samples
// or from exact (value, probability) pairs. Atoms are sorted and merged.
class EmpiricalDistribution {
public:
    static EmpiricalDistribution from_samples(std::span<const double> samples);
    // Weights must sum to 1 within 1e-12.
    static EmpiricalDistribution from_atoms(std::vector<std::pair<double, double>> atoms);
    // Exact occupation count law P(N = k), k = 0..n, placed at k / n.
    static EmpiricalDistribution from_count_law(std::span<const double> count_law);

    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    bool empty() const noexcept { return values_.empty(); }

    double cdf(double x) const;       // P(X <= x)
    double cdf_left(double x) const;  // P(X < x)
    double mean() const;

private:
    std::vector<double> values_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

// sup_x |F_emp(x) - F_law(x)|, evaluated on both sides of every atom of
// either distribution. Throws InputError when e is empty.
double ks_distance(const EmpiricalDistribution& e, const ReferenceLaw& law);

// Grid rows (x, F_empirical, F_reference) for plotting.
std::vector<std::vector<double>> cdf_comparison(const EmpiricalDistribution& e, const ReferenceLaw& law,
                                                std::span<const double> grid);

}  // namespace mrw
