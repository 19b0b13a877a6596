#include "mrw/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "mrw/error.hpp"

namespace mrw {

double NormalLaw::cdf(double x) const {
    if (!(variance > 0.0)) return x >= mean ? 1.0 : 0.0;
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

double reference_cdf(const ReferenceLaw& law, double x) {
    return std::visit([x](const auto& l) { return l.cdf(x); }, law);
}

namespace {

double reference_cdf_left(const ReferenceLaw& law, double x) {
    return std::visit([x](const auto& l) { return l.cdf_left(x); }, law);
}

// Points where the reference law itself jumps.
std::vector<double> reference_atoms(const ReferenceLaw& law) {
    if (const auto* a = std::get_if<ArcsineLaw>(&law)) {
        if (a->theta() == 0.0) return {0.0};
        if (a->theta() == 1.0) return {1.0};
    }
    if (const auto* n = std::get_if<NormalLaw>(&law); n && !(n->variance > 0.0)) return {n->mean};
    return {};
}

}  // namespace

EmpiricalDistribution EmpiricalDistribution::from_samples(std::span<const double> samples) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    EmpiricalDistribution e;
    const double w = sorted.empty() ? 0.0 : 1.0 / static_cast<double>(sorted.size());
    std::size_t run = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        ++run;
        if (k + 1 == sorted.size() || sorted[k + 1] != sorted[k]) {
            e.values_.push_back(sorted[k]);
            e.weights_.push_back(static_cast<double>(run) * w);
            e.cumulative_.push_back(static_cast<double>(k + 1) * w);
            run = 0;
        }
    }
    if (!e.cumulative_.empty()) e.cumulative_.back() = 1.0;
    return e;
}

EmpiricalDistribution EmpiricalDistribution::from_atoms(std::vector<std::pair<double, double>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    EmpiricalDistribution e;
    double total = 0.0;
    for (const auto& [v, w] : atoms) {
        if (!std::isfinite(v) || !(w >= 0.0)) throw InputError("atoms need finite values and nonnegative weights");
        if (w == 0.0) continue;
        total += w;
        if (!e.values_.empty() && e.values_.back() == v) {
            e.weights_.back() += w;
            e.cumulative_.back() = total;
        } else {
            e.values_.push_back(v);
            e.weights_.push_back(w);
            e.cumulative_.push_back(total);
        }
    }
    if (std::abs(total - 1.0) > 1e-12) throw InputError("atom weights do not sum to 1");
    return e;
}

EmpiricalDistribution EmpiricalDistribution::from_count_law(std::span<const double> count_law) {
    if (count_law.size() < 2) throw InputError("count law needs n >= 1");
    const double n = static_cast<double>(count_law.size() - 1);
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t k = 0; k < count_law.size(); ++k) atoms.emplace_back(static_cast<double>(k) / n, count_law[k]);
    return from_atoms(std::move(atoms));
}

double EmpiricalDistribution::cdf(double x) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    if (it == values_.begin()) return 0.0;
    return cumulative_[static_cast<std::size_t>(it - values_.begin()) - 1];
}

double EmpiricalDistribution::cdf_left(double x) const {
    const auto it = std::lower_bound(values_.begin(), values_.end(), x);
    if (it == values_.begin()) return 0.0;
    return cumulative_[static_cast<std::size_t>(it - values_.begin()) - 1];
}

double EmpiricalDistribution::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) m += values_[k] * weights_[k];
    return m;
}

double ks_distance(const EmpiricalDistribution& e, const ReferenceLaw& law) {
    if (e.empty()) throw InputError("ks_distance of an empty sample");
    double worst = 0.0;
    double before = 0.0;
    const auto& values = e.values();
    const auto& weights = e.weights();
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double after = k + 1 == values.size() ? 1.0 : before + weights[k];
        worst = std::max(worst, std::abs(before - reference_cdf_left(law, values[k])));
        worst = std::max(worst, std::abs(after - reference_cdf(law, values[k])));
        before = after;
    }
    for (const double t : reference_atoms(law)) {
        worst = std::max(worst, std::abs(e.cdf_left(t) - reference_cdf_left(law, t)));
        worst = std::max(worst, std::abs(e.cdf(t) - reference_cdf(law, t)));
    }
    return std::min(worst, 1.0);
}

std::vector<std::vector<double>> cdf_comparison(const EmpiricalDistribution& e, const ReferenceLaw& law,
                                                std::span<const double> grid) {
    std::vector<std::vector<double>> rows;
    rows.reserve(grid.size());
    for (const double x : grid) rows.push_back({x, e.cdf(x), reference_cdf(law, x)});
    return rows;
}

}  // namespace mrw
