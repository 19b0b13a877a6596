#include "mrw/monte_carlo.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "mrw/error.hpp"

namespace mrw {

namespace {

void check_state(const MrwModel& m, std::size_t i) {
    if (i >= m.size()) throw InputError("state index out of range");
}

bool exact_route(const MrwModel& m, std::size_t n, const McOptions& opts) {
    return opts.allow_exact && n <= opts.exact_cap && lattice_grid(m).has_value();
}

std::size_t step_cap(const MrwModel& m, std::size_t i, std::size_t n, const McOptions& opts) {
    const double mean_cycle = 1.0 / stationary_distribution(m).pi[i];
    return static_cast<std::size_t>(std::ceil(opts.step_cap_factor * static_cast<double>(n) * mean_cycle));
}

void check_budget(std::size_t capped, std::size_t paths, const McOptions& opts, const char* op) {
    if (paths == 0) return;
    if (static_cast<double>(capped) > opts.capped_budget * static_cast<double>(paths)) {
        std::ostringstream os;
        os << op << ": " << capped << " of " << paths << " paths hit the step cap";
        throw BudgetError(os.str());
    }
}

// Mean over the paths that completed, in path order.
EstimatorResult summarize_completed(const std::vector<double>& values, const std::vector<char>& done,
                                    std::uint64_t seed) {
    std::vector<double> kept;
    kept.reserve(values.size());
    for (std::size_t p = 0; p < values.size(); ++p) {
        if (done[p]) kept.push_back(values[p]);
    }
    auto r = summarize(kept, seed);
    r.capped = values.size() - kept.size();
    return r;
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

EstimatorResult summarize(std::span<const double> per_path, std::uint64_t seed) {
    EstimatorResult r;
    r.paths = per_path.size();
    r.seed = seed;
    if (per_path.empty()) return r;
    double sum = 0.0;
    for (const double v : per_path) sum += v;
    const double mean = sum / static_cast<double>(per_path.size());
    double ss = 0.0;
    for (const double v : per_path) ss += (v - mean) * (v - mean);
    r.estimate = mean;
    if (per_path.size() > 1) {
        const double sd = std::sqrt(ss / static_cast<double>(per_path.size() - 1));
        r.standard_error = sd / std::sqrt(static_cast<double>(per_path.size()));
    }
    return r;
}

ReturnStructure extract_returns(const Trajectory& t, std::size_t i) {
    ReturnStructure r;
    r.state = i;
    r.horizon = t.steps();
    std::size_t start = 0;
    double base = 0.0, drop = 0.0, rise = 0.0;
    for (std::size_t k = 1; k <= t.steps(); ++k) {
        const double rel = t.sums[k] - base;
        drop = std::max(drop, -rel);
        rise = std::max(rise, rel);
        if (t.states[k] != i) continue;
        r.epochs.push_back(k);
        r.sojourns.push_back(k - start);
        r.drops.push_back(drop);
        r.rises.push_back(rise);
        start = k;
        base = t.sums[k];
        drop = rise = 0.0;
    }
    return r;
}

EstimatorResult spitzer_average(const MrwModel& m, std::size_t i, std::size_t n, std::size_t paths,
                                std::uint64_t seed, const McOptions& opts) {
    check_state(m, i);
    if (n == 0) throw InputError("spitzer_average needs n >= 1");
    if (exact_route(m, n, opts)) {
        try {
            const auto profile = sign_profile(m, i, n, opts.limits);
            double sum = 0.0;
            for (std::size_t k = 1; k <= n; ++k) sum += profile.positive[k];
            EstimatorResult r;
            r.estimate = sum / static_cast<double>(n);
            r.seed = seed;
            r.exact = true;
            return r;
        } catch (const ResourceError&) {
            // fall through to simulation
        }
    }
    if (paths == 0) throw InputError("spitzer_average needs paths >= 1");
    const PathSampler sampler(m);
    std::vector<double> values(paths);
    for_each_path(paths, opts.threads, [&](std::size_t path) {
        CounterRng rng(seed, path);
        std::size_t state = i;
        double pos = 0.0;
        std::size_t positive = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto s = sampler.step(state, rng);
            state = s.next;
            pos += s.fine;
            positive += pos > 0.0;
        }
        values[path] = static_cast<double>(positive) / static_cast<double>(n);
    });
    return summarize(values, seed);
}

EstimatorResult embedded_spitzer_average(const MrwModel& m, std::size_t i, std::size_t n, std::size_t paths,
                                         std::uint64_t seed, const McOptions& opts) {
    check_state(m, i);
    if (n == 0 || paths == 0) throw InputError("embedded_spitzer_average needs n >= 1 and paths >= 1");
    const PathSampler sampler(m);
    const std::size_t cap = step_cap(m, i, n, opts);
    std::vector<double> values(paths, 0.0);
    std::vector<char> done(paths, 0);
    for_each_path(paths, opts.threads, [&](std::size_t path) {
        CounterRng rng(seed, path);
        std::size_t state = i;
        double pos = 0.0;
        std::size_t cycles = 0, positive = 0;
        for (std::size_t step = 0; step < cap && cycles < n; ++step) {
            const auto s = sampler.step(state, rng);
            state = s.next;
            pos += s.fine;
            if (state == i) {
                ++cycles;
                positive += pos > 0.0;
            }
        }
        done[path] = cycles == n;
        values[path] = static_cast<double>(positive) / static_cast<double>(n);
    });
    auto r = summarize_completed(values, done, seed);
    check_budget(r.capped, paths, opts, "embedded_spitzer_average");
    return r;
}

std::vector<EstimatorResult> strong_spitzer_curve(const MrwModel& m, std::size_t i, std::span<const std::size_t> n_grid,
                                                  std::size_t paths, std::uint64_t seed, const McOptions& opts) {
    check_state(m, i);
    std::vector<EstimatorResult> out;
    if (n_grid.empty()) return out;
    const std::size_t horizon = *std::max_element(n_grid.begin(), n_grid.end());
    if (exact_route(m, horizon, opts)) {
        try {
            const auto profile = sign_profile(m, i, horizon, opts.limits);
            for (const std::size_t n : n_grid) {
                EstimatorResult r;
                r.estimate = profile.positive[n];
                r.seed = seed;
                r.exact = true;
                out.push_back(r);
            }
            return out;
        } catch (const ResourceError&) {
            out.clear();
        }
    }
    if (paths == 0) throw InputError("strong_spitzer_curve needs paths >= 1");
    const PathSampler sampler(m);
    // hits[path * grid + g] = 1{S_{n_g} > 0}
    const std::size_t g = n_grid.size();
    std::vector<double> hits(paths * g, 0.0);
    for_each_path(paths, opts.threads, [&](std::size_t path) {
        CounterRng rng(seed, path);
        std::size_t state = i;
        double pos = 0.0;
        auto record = [&](std::size_t k) {
            for (std::size_t q = 0; q < g; ++q) {
                if (n_grid[q] == k) hits[path * g + q] = pos > 0.0 ? 1.0 : 0.0;
            }
        };
        record(0);
        for (std::size_t k = 1; k <= horizon; ++k) {
            const auto s = sampler.step(state, rng);
            state = s.next;
            pos += s.fine;
            record(k);
        }
    });
    std::vector<double> column(paths);
    for (std::size_t q = 0; q < g; ++q) {
        for (std::size_t p = 0; p < paths; ++p) column[p] = hits[p * g + q];
        out.push_back(summarize(column, seed));
    }
    return out;
}

std::vector<double> occupation_fraction_samples(const MrwModel& m, std::size_t i0, std::size_t n, std::size_t paths,
                                                std::uint64_t seed, const McOptions& opts) {
    check_state(m, i0);
    if (n == 0) throw InputError("occupation_fraction_samples needs n >= 1");
    const PathSampler sampler(m);
    std::vector<double> values(paths);
    for_each_path(paths, opts.threads, [&](std::size_t path) {
        CounterRng rng(seed, path);
        std::size_t state = i0;
        double pos = 0.0;
        std::size_t positive = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto s = sampler.step(state, rng);
            state = s.next;
            pos += s.fine;
            positive += pos > 0.0;
        }
        values[path] = static_cast<double>(positive) / static_cast<double>(n);
    });
    return values;
}

BoundaryResult boundary_occupation(const MrwModel& m, std::size_t i, std::size_t n, std::size_t paths,
                                   std::uint64_t seed, const McOptions& opts) {
    check_state(m, i);
    if (n == 0 || paths == 0) throw InputError("boundary_occupation needs n >= 1 and paths >= 1");
    const PathSampler sampler(m);
    const std::size_t cap = step_cap(m, i, n, opts);
    std::vector<double> above(paths, 0.0), below(paths, 0.0), total(paths, 0.0);
    std::vector<char> done(paths, 0);
    for_each_path(paths, opts.threads, [&](std::size_t path) {
        CounterRng rng(seed, path);
        std::size_t state = i;
        double pos = 0.0, start_level = 0.0, drop = 0.0, rise = 0.0;
        std::size_t cycles = 0, sojourn = 0;
        double sum_above = 0.0, sum_below = 0.0;
        for (std::size_t step = 0; step < cap && cycles < n; ++step) {
            const auto s = sampler.step(state, rng);
            state = s.next;
            pos += s.fine;
            ++sojourn;
            const double rel = pos - start_level;
            drop = std::max(drop, -rel);
            rise = std::max(rise, rel);
            if (state != i) continue;
            const auto chi = static_cast<double>(sojourn);
            if (0.0 < start_level && start_level <= drop) sum_above += chi;
            if (-rise < start_level && start_level <= 0.0) sum_below += chi;
            ++cycles;
            sojourn = 0;
            start_level = pos;
            drop = rise = 0.0;
        }
        done[path] = cycles == n;
        above[path] = sum_above / static_cast<double>(n);
        below[path] = sum_below / static_cast<double>(n);
        total[path] = above[path] + below[path];
    });
    BoundaryResult r;
    r.total = summarize_completed(total, done, seed);
    r.above = summarize_completed(above, done, seed);
    r.below = summarize_completed(below, done, seed);
    r.null_homologous = is_null_homologous(m).null_homologous;
    check_budget(r.total.capped, paths, opts, "boundary_occupation");
    return r;
}

CltResult clt_check(const MrwModel& m, std::size_t i0, std::size_t n, std::size_t paths, std::uint64_t seed,
                    const McOptions& opts) {
    check_state(m, i0);
    CltResult out;
    if (paths == 0) return out;
    if (n == 0) throw InputError("clt_check needs n >= 1");
    const PathSampler sampler(m);
    const double pi_i = stationary_distribution(m).pi[i0];
    const double unit = sampler.unit();
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<double> sq(paths, 0.0);
    std::vector<std::size_t> cycles(paths, 0);
    out.samples.assign(paths, 0.0);
    for_each_path(paths, opts.threads, [&](std::size_t path) {
        CounterRng rng(seed, path);
        std::size_t state = i0;
        double pos = 0.0, cycle_start = 0.0, acc = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto s = sampler.step(state, rng);
            state = s.next;
            pos += s.fine;
            if (state == i0) {
                const double inc = (pos - cycle_start) * unit;
                acc += inc * inc;
                ++count;
                cycle_start = pos;
            }
        }
        out.samples[path] = pos * unit / root_n;
        sq[path] = acc;
        cycles[path] = count;
    });
    double total = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
        total += sq[p];
        out.cycles += cycles[p];
    }
    if (out.cycles > 0) out.theta2 = pi_i * total / static_cast<double>(out.cycles);
    return out;
}

}  // namespace mrw
