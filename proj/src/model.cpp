#include "mrw/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "mrw/error.hpp"

namespace mrw {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kPotentialTolerance = 1e-12;
constexpr double kLatticeTolerance = 1e-9;
constexpr std::int64_t kMaxOffsetDenominator = 1'000'000;
constexpr std::size_t kDirectSolveLimit = 64;
constexpr std::size_t kPowerIterationCap = 1'000'000;

std::vector<bool> reachable_from(const MrwModel& m, std::size_t start, bool reverse) {
    const std::size_t n = m.size();
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
            const bool edge = reverse ? m.live(v, u) : m.live(u, v);
            if (edge && !seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

double float_gcd(double a, double b) {
    if (a < b) std::swap(a, b);
    const double tol = kLatticeTolerance * a;
    while (b > tol) {
        double r = std::fmod(a, b);
        if (r > b - tol) r = 0.0;
        a = b;
        b = r;
    }
    return a;
}

bool near_integer(double x) {
    return std::abs(x - std::round(x)) <= kLatticeTolerance * std::max(1.0, std::abs(x));
}

// Best rational p/q in [0, 1) within tolerance, q bounded.
std::optional<std::pair<std::int64_t, std::int64_t>> rationalize(double f) {
    if (std::abs(f) <= kLatticeTolerance) return std::pair<std::int64_t, std::int64_t>{0, 1};
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = f;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(x);
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t p2 = ai * p1 + p0;
        const std::int64_t q2 = ai * q1 + q0;
        if (q2 > kMaxOffsetDenominator) break;
        if (std::abs(f - static_cast<double>(p2) / static_cast<double>(q2)) <= kLatticeTolerance) {
            return std::pair<std::int64_t, std::int64_t>{p2, q2};
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = x - a;
        if (frac <= 0.0) break;
        x = 1.0 / frac;
    }
    return std::nullopt;
}

}  // namespace

MrwModel::MrwModel(std::vector<std::string> labels, std::vector<double> transition,
                   std::vector<std::optional<StepKernel>> kernels)
    : labels_(std::move(labels)), transition_(std::move(transition)), kernels_(std::move(kernels)) {
    const std::size_t n = labels_.size();
    if (n == 0) throw InputError("model needs at least one state");
    if (transition_.size() != n * n) throw InputError("transition matrix must be |S| x |S|");
    if (kernels_.size() != n * n) throw InputError("kernel array must be |S| x |S|");
}

MrwModel MrwModel::single_state(StepKernel kernel, std::string label) {
    return MrwModel({std::move(label)}, {1.0}, {std::move(kernel)});
}

std::optional<std::size_t> MrwModel::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

ValidationReport validate_model(const MrwModel& m) {
    ValidationReport report;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        bool entries_ok = true;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = m.p(i, j);
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) entries_ok = false;
            row += p;
        }
        std::ostringstream os;
        if (!entries_ok) {
            os << "state '" << m.label(i) << "': transition entries must lie in [0, 1]";
            report.failures.push_back(os.str());
        } else if (std::abs(row - 1.0) > kRowSumTolerance) {
            os << "state '" << m.label(i) << "': row sum " << row;
            report.failures.push_back(os.str());
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!(m.p(i, j) > 0.0)) continue;
            std::ostringstream os;
            os << "edge '" << m.label(i) << "' -> '" << m.label(j) << "': ";
            const auto& k = m.kernel(i, j);
            if (!k) {
                os << "missing kernel";
                report.failures.push_back(os.str());
            } else if (auto defect = kernel_defect(*k); !defect.empty()) {
                os << defect;
                report.failures.push_back(os.str());
            }
        }
    }
    const auto forward = reachable_from(m, 0, false);
    const auto backward = reachable_from(m, 0, true);
    for (std::size_t v = 0; v < n; ++v) {
        if (!forward[v] || !backward[v]) {
            std::ostringstream os;
            os << "not strongly connected: state '" << m.label(v) << "' is "
               << (!forward[v] ? "unreachable from" : "unable to reach") << " state '" << m.label(0) << "'";
            report.failures.push_back(os.str());
        }
    }
    if (report.passed()) {
        report.lattice_exact = lattice_grid(m, &report.lattice_reason).has_value();
    } else {
        report.lattice_reason = "model is invalid";
    }
    return report;
}

void require_valid(const MrwModel& m) {
    const auto report = validate_model(m);
    if (report.passed()) return;
    std::string msg = "invalid model:";
    for (const auto& f : report.failures) msg += "\n  " + f;
    throw InputError(msg);
}

StationaryDistribution stationary_distribution(const MrwModel& m) {
    require_valid(m);
    const std::size_t n = m.size();
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> P(
        m.transition().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd pi(static_cast<Eigen::Index>(n));
    auto residual = [&](const Eigen::VectorXd& v) { return (P.transpose() * v - v).cwiseAbs().maxCoeff(); };

    if (n <= kDirectSolveLimit) {
        Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
        A.row(static_cast<Eigen::Index>(n) - 1).setOnes();
        Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        b(static_cast<Eigen::Index>(n) - 1) = 1.0;
        pi = A.fullPivLu().solve(b);
    } else {
        pi = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
        bool converged = false;
        for (std::size_t it = 0; it < kPowerIterationCap; ++it) {
            Eigen::VectorXd next = 0.5 * (pi + P.transpose() * pi);
            next /= next.sum();
            const double change = (next - pi).cwiseAbs().maxCoeff();
            pi = std::move(next);
            if (change <= 1e-15 && residual(pi) <= 1e-12) {
                converged = true;
                break;
            }
        }
        if (!converged) throw SolverError("stationary distribution: power iteration did not converge");
    }
    pi /= pi.sum();
    if (residual(pi) > 1e-10 || pi.minCoeff() <= 0.0) {
        throw SolverError("stationary distribution: residual too large or non-positive entry");
    }
    return {std::vector<double>(pi.data(), pi.data() + n)};
}

PeriodInfo period(const MrwModel& m) {
    require_valid(m);
    const std::size_t n = m.size();
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> level(n, unset);
    std::deque<std::size_t> queue{0};
    level[0] = 0;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
            if (m.live(u, v) && level[v] == unset) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    // gcd over edges of level(u) + 1 - level(v) equals the gcd of cycle lengths.
    std::int64_t d = 0;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (!m.live(u, v)) continue;
            const auto gap = static_cast<std::int64_t>(level[u]) + 1 - static_cast<std::int64_t>(level[v]);
            d = std::gcd(d, gap < 0 ? -gap : gap);
        }
    }
    PeriodInfo info;
    info.period = d == 0 ? 1 : static_cast<std::size_t>(d);
    info.classes.resize(info.period);
    for (std::size_t v = 0; v < n; ++v) info.classes[level[v] % info.period].push_back(v);
    return info;
}

DualModel dual(const MrwModel& m) {
    const auto pi = stationary_distribution(m).pi;
    const std::size_t n = m.size();
    std::vector<double> p(n * n, 0.0);
    std::vector<std::optional<StepKernel>> kernels(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!m.live(j, i)) continue;
            p[i * n + j] = pi[j] * m.p(j, i) / pi[i];
            kernels[i * n + j] = m.kernel(j, i);
        }
    }
    return MrwModel(m.labels(), std::move(p), std::move(kernels));
}

MrwModel reflected(const MrwModel& m) {
    std::vector<std::optional<StepKernel>> kernels(m.kernels().begin(), m.kernels().end());
    for (auto& k : kernels) {
        if (k) k = negated(*k);
    }
    return MrwModel(m.labels(), std::vector<double>(m.transition().begin(), m.transition().end()),
                    std::move(kernels));
}

NullHomology is_null_homologous(const MrwModel& m) {
    require_valid(m);
    const std::size_t n = m.size();
    NullHomology out;
    auto edge_name = [&](std::size_t i, std::size_t j) {
        return "'" + m.label(i) + "' -> '" + m.label(j) + "'";
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (m.live(i, j) && !point_value(*m.kernel(i, j))) {
                out.reason = "edge " + edge_name(i, j) + " carries non-point kernel " + describe(*m.kernel(i, j));
                return out;
            }
        }
    }
    std::vector<double> g(n, 0.0);
    std::vector<bool> assigned(n, false);
    std::deque<std::size_t> queue{0};
    assigned[0] = true;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
            if (!m.live(u, v) || assigned[v]) continue;
            g[v] = g[u] + *point_value(*m.kernel(u, v));
            assigned[v] = true;
            queue.push_back(v);
        }
    }
    // Every edge consistent with g <=> every directed cycle sums to zero.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!m.live(i, j)) continue;
            const double v = *point_value(*m.kernel(i, j));
            const double defect = v - (g[j] - g[i]);
            if (std::abs(defect) > kPotentialTolerance) {
                std::ostringstream os;
                os << "edge " << edge_name(i, j) << " has increment " << v << " but potential difference "
                   << g[j] - g[i] << " (cycle sum " << defect << ")";
                out.reason = os.str();
                return out;
            }
        }
    }
    out.null_homologous = true;
    out.potential = std::move(g);
    return out;
}

std::optional<LatticeGrid> lattice_grid(const MrwModel& m, std::string* reason) {
    auto fail = [&](std::string why) -> std::optional<LatticeGrid> {
        if (reason) *reason = std::move(why);
        return std::nullopt;
    };
    const std::size_t n = m.size();
    std::optional<double> span;
    std::vector<double> offsets;
    for (std::size_t e = 0; e < n * n; ++e) {
        if (!(m.transition()[e] > 0.0)) continue;
        const auto& k = m.kernels()[e];
        if (!k) return fail("missing kernel");
        if (std::holds_alternative<GaussianKernel>(*k)) return fail("Gaussian kernel on a live edge");
        if (const auto* l = std::get_if<LatticeKernel>(&*k)) {
            if (span && std::abs(*span - l->span) > kLatticeTolerance * *span) {
                return fail("lattice kernels use different spans");
            }
            if (!span) span = l->span;
            offsets.push_back(l->offset);
        } else {
            offsets.push_back(std::get<PointKernel>(*k).value);
        }
    }
    if (!span) {
        double h = 0.0;
        double largest = 0.0;
        for (const double o : offsets) {
            largest = std::max(largest, std::abs(o));
            if (std::abs(o) > 0.0) h = h == 0.0 ? std::abs(o) : float_gcd(h, std::abs(o));
        }
        if (h == 0.0) h = 1.0;
        if (h < 1e-6 * largest) return fail("point values are not commensurable");
        span = h;
    }
    const double h = *span;
    const double f = offsets.front() / h - std::floor(offsets.front() / h);
    double frac = f > 1.0 - kLatticeTolerance ? 0.0 : f;
    const auto rational = rationalize(frac);
    if (!rational) return fail("common offset is not a rational multiple of the span");
    LatticeGrid grid;
    grid.span = h;
    grid.offset_num = rational->first;
    grid.offset_den = rational->second;
    grid.offset = h * static_cast<double>(grid.offset_num) / static_cast<double>(grid.offset_den);
    grid.shifts.resize(n * n);
    for (std::size_t e = 0; e < n * n; ++e) {
        if (!(m.transition()[e] > 0.0)) continue;
        const auto& k = *m.kernels()[e];
        double base = 0.0;
        if (const auto* l = std::get_if<LatticeKernel>(&k)) {
            base = l->offset;
        } else {
            base = std::get<PointKernel>(k).value;
        }
        const double z = (base - grid.offset) / h;
        if (!near_integer(z)) return fail("kernel offsets do not share a residue modulo the span");
        const auto zi = static_cast<std::int64_t>(std::llround(z));
        if (const auto* l = std::get_if<LatticeKernel>(&k)) {
            for (const auto& [index, p] : l->pmf) {
                if (p > 0.0) grid.shifts[e].emplace_back(zi + index, p);
            }
        } else {
            grid.shifts[e].emplace_back(zi, 1.0);
        }
    }
    return grid;
}

PathSampler::PathSampler(const MrwModel& m) {
    require_valid(m);
    const std::size_t n = m.size();
    const auto grid = lattice_grid(m);
    lattice_exact_ = grid.has_value();
    unit_ = lattice_exact_ ? grid->unit() : 1.0;
    first_.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> weights;
        for (std::size_t j = 0; j < n; ++j) {
            if (!m.live(i, j)) continue;
            const double pij = m.p(i, j);
            const auto& k = *m.kernel(i, j);
            if (const auto* g = std::get_if<GaussianKernel>(&k)) {
                outcomes_.push_back({static_cast<std::uint32_t>(j), true, g->mean, g->mean, g->stddev});
                weights.push_back(pij);
                continue;
            }
            const auto atoms = kernel_atoms(k);
            for (std::size_t a = 0; a < atoms.size(); ++a) {
                double fine = atoms[a].value;
                if (lattice_exact_) fine = static_cast<double>(grid->fine_step(grid->shifts[i * n + j][a].first));
                outcomes_.push_back({static_cast<std::uint32_t>(j), false, atoms[a].value, fine, 0.0});
                weights.push_back(pij * atoms[a].probability);
            }
        }
        // Vose alias table over this state's outcomes.
        const std::size_t count = weights.size();
        double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        std::vector<double> scaled(count);
        for (std::size_t k = 0; k < count; ++k) scaled[k] = weights[k] * static_cast<double>(count) / total;
        std::vector<std::uint64_t> thr(count, ~std::uint64_t{0});
        std::vector<std::uint32_t> alias(count);
        std::iota(alias.begin(), alias.end(), 0U);
        std::vector<std::size_t> small, large;
        for (std::size_t k = 0; k < count; ++k) (scaled[k] < 1.0 ? small : large).push_back(k);
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            small.pop_back();
            const std::size_t l = large.back();
            thr[s] = static_cast<std::uint64_t>(std::ldexp(scaled[s], 64));
            alias[s] = static_cast<std::uint32_t>(l);
            scaled[l] -= 1.0 - scaled[s];
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        const std::size_t base = first_.back();
        threshold_.insert(threshold_.end(), thr.begin(), thr.end());
        for (auto& a : alias) a += static_cast<std::uint32_t>(base);
        alias_.insert(alias_.end(), alias.begin(), alias.end());
        first_.push_back(base + count);
    }
}

__extension__ using uint128 = unsigned __int128;

PathSampler::Step PathSampler::step(std::size_t state, CounterRng& rng) const noexcept {
    const std::size_t begin = first_[state];
    const std::size_t count = first_[state + 1] - begin;
    std::size_t pick = begin;
    if (count > 1) {
        const auto wide = static_cast<uint128>(rng.next()) * count;
        const std::size_t slot = begin + static_cast<std::size_t>(wide >> 64);
        const auto frac = static_cast<std::uint64_t>(wide);
        const std::uint64_t t = threshold_[slot];
        pick = (t == ~std::uint64_t{0} || frac < t) ? slot : alias_[slot];
    }
    const Outcome& o = outcomes_[pick];
    if (o.gaussian) {
        const double x = o.value + o.stddev * rng.normal();
        return {o.next, x, x};
    }
    return {o.next, o.value, o.fine};
}

Trajectory simulate(const PathSampler& sampler, std::size_t i0, std::size_t n, CounterRng& rng) {
    if (i0 >= sampler.size()) throw InputError("initial state out of range");
    Trajectory t;
    t.initial_state = i0;
    t.states.reserve(n + 1);
    t.increments.reserve(n);
    t.sums.reserve(n + 1);
    t.states.push_back(i0);
    t.sums.push_back(0.0);
    std::size_t state = i0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto s = sampler.step(state, rng);
        state = s.next;
        t.states.push_back(state);
        t.increments.push_back(s.value);
        t.sums.push_back(t.sums.back() + s.value);
    }
    return t;
}

Trajectory simulate(const MrwModel& m, std::size_t i0, std::size_t n, std::uint64_t seed) {
    const PathSampler sampler(m);
    CounterRng rng(seed, 0);
    return simulate(sampler, i0, n, rng);
}

}  // namespace mrw
