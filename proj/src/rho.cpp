#include "mrw/rho.hpp"

#include <cmath>

#include "mrw/error.hpp"

namespace mrw {

const EstimatorResult& RhoReport::line(const std::string& name) const {
    for (const auto& l : lines) {
        if (l.name == name) return l.result;
    }
    throw InputError("no rho line named " + name);
}

RhoReport rho_report(const MrwModel& m, std::size_t i, const RhoConfig& config) {
    if (i >= m.size()) throw InputError("state index out of range");
    if (config.n == 0 || config.paths == 0) throw InputError("rho_report needs n >= 1 and paths >= 1");
    const auto& opts = config.options;
    RhoReport report;
    report.state = i;

    const auto fractions = occupation_fraction_samples(m, i, config.n, config.paths, config.seed, opts);
    report.lines.push_back({"occupation", summarize(fractions, config.seed)});

    const std::uint64_t embedded_seed = derive_seed(config.seed, 1);
    report.lines.push_back(
        {"embedded", embedded_spitzer_average(m, i, config.n, config.paths, embedded_seed, opts)});

    report.lines.push_back({"spitzer", spitzer_average(m, i, config.n, config.paths, config.seed, opts)});

    const std::size_t grid[] = {config.n};
    report.lines.push_back(
        {"terminal", strong_spitzer_curve(m, i, grid, config.paths, derive_seed(config.seed, 2), opts).front()});

    const auto pi = stationary_distribution(m).pi;
    EstimatorResult mixed;
    mixed.seed = config.seed;
    mixed.exact = true;
    double variance = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        const auto r = spitzer_average(m, j, config.n, config.paths, derive_seed(config.seed, 100 + j), opts);
        mixed.estimate += pi[j] * r.estimate;
        variance += pi[j] * pi[j] * r.standard_error * r.standard_error;
        mixed.exact = mixed.exact && r.exact;
        mixed.paths += r.paths;
    }
    mixed.standard_error = std::sqrt(variance);
    report.lines.push_back({"spitzer_pi", mixed});

    for (std::size_t a = 0; a < report.lines.size(); ++a) {
        for (std::size_t b = a + 1; b < report.lines.size(); ++b) {
            report.max_gap = std::max(report.max_gap,
                                      std::abs(report.lines[a].result.estimate - report.lines[b].result.estimate));
        }
    }
    report.pass = report.max_gap <= config.tolerance;
    return report;
}

}  // namespace mrw
