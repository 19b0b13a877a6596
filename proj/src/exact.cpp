#include "mrw/exact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mrw/error.hpp"
#include "mrw/report_io.hpp"

namespace mrw {

namespace {

struct Edge {
    std::size_t state;  // source (for inbound lists) or target (for outbound lists)
    std::int64_t shift;
    double weight;      // p_ij * atom probability
};

struct Prepared {
    LatticeGrid grid;
    std::size_t states = 0;
    std::int64_t dmin = 0;
    std::int64_t dmax = 0;
    std::vector<std::vector<Edge>> into;  // into[j]: sources i ascending, atoms in order
    std::vector<std::vector<Edge>> out;   // out[i]: targets j ascending, atoms in order
};

Prepared prepare(const MrwModel& m, const char* op) {
    require_valid(m);
    std::string why;
    auto grid = lattice_grid(m, &why);
    if (!grid) throw UnsupportedModelError(std::string(op) + " needs a lattice-exact model: " + why);
    Prepared p;
    p.states = m.size();
    p.into.resize(p.states);
    p.out.resize(p.states);
    bool first = true;
    for (std::size_t i = 0; i < p.states; ++i) {
        for (std::size_t j = 0; j < p.states; ++j) {
            if (!m.live(i, j)) continue;
            for (const auto& [shift, prob] : grid->shifts[i * p.states + j]) {
                p.out[i].push_back({j, shift, m.p(i, j) * prob});
                if (first) {
                    p.dmin = p.dmax = shift;
                    first = false;
                }
                p.dmin = std::min(p.dmin, shift);
                p.dmax = std::max(p.dmax, shift);
            }
        }
    }
    for (std::size_t j = 0; j < p.states; ++j) {
        for (std::size_t i = 0; i < p.states; ++i) {
            for (const auto& e : p.out[i]) {
                if (e.state == j) p.into[j].push_back({i, e.shift, e.weight});
            }
        }
    }
    p.grid = std::move(*grid);
    return p;
}

void check_state(const MrwModel& m, std::size_t i) {
    if (i >= m.size()) throw InputError("state index out of range");
}

void check_cells(std::size_t cells, std::size_t cap, const char* op) {
    if (cells > cap) {
        std::ostringstream os;
        os << op << ": " << cells << " DP cells exceed support_cap " << cap;
        throw ResourceError("support_cap", os.str());
    }
}

std::size_t window_after(const Prepared& p, std::size_t n) {
    return static_cast<std::size_t>(static_cast<std::int64_t>(n) * (p.dmax - p.dmin)) + 1;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Largest index that does NOT exceed the threshold after `t` steps:
// S_t > x  <=>  index > threshold_index(t).
std::int64_t threshold_index(const LatticeGrid& g, std::size_t t, double x) {
    constexpr auto lo = std::numeric_limits<std::int64_t>::min();
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (std::isinf(x)) return x > 0 ? hi : lo;
    if (x == 0.0) {
        // den * a + t * num > 0  <=>  a > floor(-t * num / den)
        return floor_div(-static_cast<std::int64_t>(t) * g.offset_num, g.offset_den);
    }
    const double r = (x - static_cast<double>(t) * g.offset) / g.span;
    if (r >= 9e18) return hi;
    if (r <= -9e18) return lo;
    const double nearest = std::round(r);
    if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, std::abs(r))) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::floor(r));
}

struct Window {
    std::int64_t min_index = 0;
    std::size_t width = 1;
    std::vector<double> mass;
};

Window start_window(const Prepared& p, std::size_t i0) {
    Window w;
    w.mass.assign(p.states, 0.0);
    w.mass[i0] = 1.0;
    return w;
}

// One forward step. Summation order inside each cell is fixed: sources
// ascending, atoms in kernel order, source cells ascending.
void advance(const Prepared& p, const Window& cur, Window& next) {
    next.min_index = cur.min_index + p.dmin;
    next.width = cur.width + static_cast<std::size_t>(p.dmax - p.dmin);
    next.mass.assign(p.states * next.width, 0.0);
    for (std::size_t j = 0; j < p.states; ++j) {
        double* dst = next.mass.data() + j * next.width;
        for (const auto& e : p.into[j]) {
            const double* src = cur.mass.data() + e.state * cur.width;
            double* out = dst + (e.shift - p.dmin);
            const double w = e.weight;
            for (std::size_t x = 0; x < cur.width; ++x) out[x] += src[x] * w;
        }
    }
}

LatticeLaw to_law(const Prepared& p, std::size_t n, Window&& w) {
    LatticeLaw law;
    law.steps = n;
    law.states = p.states;
    law.span = p.grid.span;
    law.offset = p.grid.offset;
    law.offset_num = p.grid.offset_num;
    law.offset_den = p.grid.offset_den;
    law.min_index = w.min_index;
    law.width = w.width;
    law.mass = std::move(w.mass);
    return law;
}

// Summation rounding can push an event probability a few ulps past 1.
double probability(double t) noexcept { return std::clamp(t, 0.0, 1.0); }

}  // namespace

double LatticeLaw::at(std::size_t state, std::int64_t index) const noexcept {
    if (state >= states || index < min_index || index > max_index()) return 0.0;
    return mass[state * width + static_cast<std::size_t>(index - min_index)];
}

int LatticeLaw::sign(std::int64_t index) const noexcept {
    const std::int64_t fine = offset_den * index + static_cast<std::int64_t>(steps) * offset_num;
    return (fine > 0) - (fine < 0);
}

double LatticeLaw::total() const noexcept {
    double t = 0.0;
    for (const double v : mass) t += v;
    return t;
}

double LatticeLaw::prob_positive_at(std::size_t state) const noexcept {
    double t = 0.0;
    for (std::size_t x = 0; x < width; ++x) {
        if (sign(min_index + static_cast<std::int64_t>(x)) > 0) t += mass[state * width + x];
    }
    return probability(t);
}

double LatticeLaw::prob_positive() const noexcept {
    double t = 0.0;
    for (std::size_t j = 0; j < states; ++j) t += prob_positive_at(j);
    return probability(t);
}

double LatticeLaw::prob_zero() const noexcept {
    double t = 0.0;
    for (std::size_t j = 0; j < states; ++j) {
        for (std::size_t x = 0; x < width; ++x) {
            if (sign(min_index + static_cast<std::int64_t>(x)) == 0) t += mass[j * width + x];
        }
    }
    return probability(t);
}

double LatticeLaw::prob_negative() const noexcept {
    double t = 0.0;
    for (std::size_t j = 0; j < states; ++j) {
        for (std::size_t x = 0; x < width; ++x) {
            if (sign(min_index + static_cast<std::int64_t>(x)) < 0) t += mass[j * width + x];
        }
    }
    return probability(t);
}

LatticeLaw exact_law(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits) {
    const auto p = prepare(m, "exact_law");
    check_state(m, i0);
    check_cells(p.states * window_after(p, n), limits.support_cap, "exact_law");
    Window cur = start_window(p, i0);
    Window next;
    for (std::size_t k = 0; k < n; ++k) {
        advance(p, cur, next);
        std::swap(cur, next);
    }
    return to_law(p, n, std::move(cur));
}

double prob_positive(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits) {
    return exact_law(m, i0, n, limits).prob_positive();
}

double prob_positive_at_state(const MrwModel& m, std::size_t i0, std::size_t j, std::size_t n,
                              const ExactLimits& limits) {
    check_state(m, j);
    return exact_law(m, i0, n, limits).prob_positive_at(j);
}

SignProfile sign_profile(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits) {
    const auto p = prepare(m, "sign_profile");
    check_state(m, i0);
    check_cells(p.states * window_after(p, n), limits.support_cap, "sign_profile");
    SignProfile out;
    out.positive.push_back(0.0);
    out.zero.push_back(1.0);
    out.negative.push_back(0.0);
    Window cur = start_window(p, i0);
    Window next;
    for (std::size_t k = 1; k <= n; ++k) {
        advance(p, cur, next);
        std::swap(cur, next);
        double pos = 0.0, zero = 0.0, neg = 0.0;
        for (std::size_t j = 0; j < p.states; ++j) {
            for (std::size_t x = 0; x < cur.width; ++x) {
                const double v = cur.mass[j * cur.width + x];
                const std::int64_t fine = p.grid.fine(cur.min_index + static_cast<std::int64_t>(x), static_cast<std::int64_t>(k));
                (fine > 0 ? pos : fine < 0 ? neg : zero) += v;
            }
        }
        out.positive.push_back(probability(pos));
        out.zero.push_back(probability(zero));
        out.negative.push_back(probability(neg));
    }
    return out;
}

double OccupationLaw::at(std::size_t state, std::int64_t index, std::size_t count) const noexcept {
    if (state >= states || count > steps || index < min_index ||
        index >= min_index + static_cast<std::int64_t>(width)) {
        return 0.0;
    }
    return mass[(state * width + static_cast<std::size_t>(index - min_index)) * (steps + 1) + count];
}

std::vector<double> OccupationLaw::count_law() const {
    std::vector<double> law(steps + 1, 0.0);
    for (std::size_t cell = 0; cell < states * width; ++cell) {
        for (std::size_t c = 0; c <= steps; ++c) law[c] += mass[cell * (steps + 1) + c];
    }
    return law;
}

LatticeLaw OccupationLaw::lattice_marginal() const {
    LatticeLaw law;
    law.steps = steps;
    law.states = states;
    law.span = span;
    law.offset = offset;
    law.offset_num = offset_num;
    law.offset_den = offset_den;
    law.min_index = min_index;
    law.width = width;
    law.mass.assign(states * width, 0.0);
    for (std::size_t cell = 0; cell < states * width; ++cell) {
        for (std::size_t c = 0; c <= steps; ++c) law.mass[cell] += mass[cell * (steps + 1) + c];
    }
    return law;
}

double OccupationLaw::total() const noexcept {
    double t = 0.0;
    for (const double v : mass) t += v;
    return t;
}

OccupationLaw threshold_occupation_law(const MrwModel& m, std::size_t i0, std::size_t n, double x,
                                       const ExactLimits& limits) {
    const auto p = prepare(m, "occupation_law");
    check_state(m, i0);
    if (std::isnan(x)) throw InputError("threshold must not be NaN");
    if (n > limits.occupation_cap) {
        std::ostringstream os;
        os << "occupation_law: n = " << n << " exceeds occupation_cap " << limits.occupation_cap;
        throw ResourceError("occupation_cap", os.str());
    }
    const std::size_t counts = n + 1;
    check_cells(p.states * window_after(p, n) * counts, limits.support_cap, "occupation_law");

    std::int64_t cur_min = 0;
    std::size_t cur_width = 1;
    std::vector<double> cur(p.states * counts, 0.0);
    cur[i0 * counts] = 1.0;
    std::vector<double> next;
    for (std::size_t t = 1; t <= n; ++t) {
        const std::int64_t next_min = cur_min + p.dmin;
        const std::size_t next_width = cur_width + static_cast<std::size_t>(p.dmax - p.dmin);
        const std::int64_t thr = threshold_index(p.grid, t, x);
        next.assign(p.states * next_width * counts, 0.0);
        for (std::size_t j = 0; j < p.states; ++j) {
            for (const auto& e : p.into[j]) {
                const std::size_t offset = static_cast<std::size_t>(e.shift - p.dmin);
                for (std::size_t cx = 0; cx < cur_width; ++cx) {
                    const std::size_t tx = cx + offset;
                    const std::size_t bump = (next_min + static_cast<std::int64_t>(tx)) > thr ? 1 : 0;
                    const double* src = cur.data() + (e.state * cur_width + cx) * counts;
                    double* dst = next.data() + (j * next_width + tx) * counts + bump;
                    for (std::size_t c = 0; c < t; ++c) dst[c] += src[c] * e.weight;
                }
            }
        }
        std::swap(cur, next);
        cur_min = next_min;
        cur_width = next_width;
    }
    OccupationLaw law;
    law.steps = n;
    law.states = p.states;
    law.threshold = x;
    law.span = p.grid.span;
    law.offset = p.grid.offset;
    law.offset_num = p.grid.offset_num;
    law.offset_den = p.grid.offset_den;
    law.min_index = cur_min;
    law.width = cur_width;
    law.mass = std::move(cur);
    return law;
}

OccupationLaw occupation_law(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits) {
    return threshold_occupation_law(m, i0, n, 0.0, limits);
}

std::vector<double> threshold_counts_law(const MrwModel& m, std::size_t i0, std::size_t n, double x,
                                         const ExactLimits& limits) {
    return threshold_occupation_law(m, i0, n, x, limits).count_law();
}

double ReturnLaw::at(std::size_t tau, std::int64_t index) const noexcept {
    if (tau == 0 || tau > slices.size()) return 0.0;
    const auto& s = slices[tau - 1];
    if (index < s.min_index || index >= s.min_index + static_cast<std::int64_t>(s.mass.size())) return 0.0;
    return s.mass[static_cast<std::size_t>(index - s.min_index)];
}

double ReturnLaw::prob_tau(std::size_t tau) const noexcept {
    if (tau == 0 || tau > slices.size()) return 0.0;
    double t = 0.0;
    for (const double v : slices[tau - 1].mass) t += v;
    return t;
}

double ReturnLaw::total() const noexcept {
    double t = tail;
    for (std::size_t tau = 1; tau <= slices.size(); ++tau) t += prob_tau(tau);
    return t;
}

ReturnLaw embedded_return_law(const MrwModel& m, std::size_t i, std::size_t horizon, const ExactLimits& limits) {
    const auto p = prepare(m, "embedded_return_law");
    check_state(m, i);
    check_cells(p.states * window_after(p, horizon), limits.support_cap, "embedded_return_law");
    ReturnLaw law;
    law.state = i;
    law.horizon = horizon;
    law.span = p.grid.span;
    law.offset = p.grid.offset;
    law.offset_num = p.grid.offset_num;
    law.offset_den = p.grid.offset_den;
    Window cur = start_window(p, i);
    Window next;
    for (std::size_t t = 1; t <= horizon; ++t) {
        advance(p, cur, next);
        std::swap(cur, next);
        double* row = cur.mass.data() + i * cur.width;
        std::size_t lo = 0, hi = cur.width;
        while (lo < hi && row[lo] == 0.0) ++lo;
        while (hi > lo && row[hi - 1] == 0.0) --hi;
        ReturnLaw::Slice slice;
        slice.min_index = cur.min_index + static_cast<std::int64_t>(lo);
        slice.mass.assign(row + lo, row + hi);
        std::fill(row, row + cur.width, 0.0);
        law.slices.push_back(std::move(slice));
    }
    for (const double v : cur.mass) law.tail += v;
    return law;
}

double max_abs_difference(const ReturnLaw& a, const ReturnLaw& b) {
    if (a.span != b.span || a.offset_num != b.offset_num || a.offset_den != b.offset_den) {
        throw InputError("return laws live on different lattices");
    }
    double worst = std::abs(a.tail - b.tail);
    const std::size_t taus = std::max(a.slices.size(), b.slices.size());
    for (std::size_t tau = 1; tau <= taus; ++tau) {
        std::int64_t lo = std::numeric_limits<std::int64_t>::max();
        std::int64_t hi = std::numeric_limits<std::int64_t>::min();
        for (const auto* law : {&a, &b}) {
            if (tau > law->slices.size()) continue;
            const auto& s = law->slices[tau - 1];
            if (s.mass.empty()) continue;
            lo = std::min(lo, s.min_index);
            hi = std::max(hi, s.min_index + static_cast<std::int64_t>(s.mass.size()) - 1);
        }
        for (std::int64_t x = lo; x <= hi; ++x) worst = std::max(worst, std::abs(a.at(tau, x) - b.at(tau, x)));
    }
    return worst;
}

double max_abs_difference(const LatticeLaw& a, const LatticeLaw& b) {
    if (a.states != b.states || a.steps != b.steps || a.span != b.span || a.offset_num != b.offset_num ||
        a.offset_den != b.offset_den) {
        throw InputError("laws live on different lattices");
    }
    const std::int64_t lo = std::min(a.min_index, b.min_index);
    const std::int64_t hi = std::max(a.max_index(), b.max_index());
    double worst = 0.0;
    for (std::size_t j = 0; j < a.states; ++j) {
        for (std::int64_t x = lo; x <= hi; ++x) worst = std::max(worst, std::abs(a.at(j, x) - b.at(j, x)));
    }
    return worst;
}

EmbeddedPositivity embedded_positivity_average(const MrwModel& m, std::size_t i, std::size_t n,
                                               std::size_t horizon, const ExactLimits& limits) {
    const auto returns = embedded_return_law(m, i, horizon, limits);
    // Cycle law in fine units: S_tau = unit * (den * index + tau * num).
    std::map<std::int64_t, double> cycle_map;
    for (std::size_t tau = 1; tau <= returns.slices.size(); ++tau) {
        const auto& s = returns.slices[tau - 1];
        for (std::size_t x = 0; x < s.mass.size(); ++x) {
            if (s.mass[x] == 0.0) continue;
            const std::int64_t index = s.min_index + static_cast<std::int64_t>(x);
            cycle_map[returns.offset_den * index + static_cast<std::int64_t>(tau) * returns.offset_num] += s.mass[x];
        }
    }
    EmbeddedPositivity out;
    out.neglected_mass = static_cast<double>(n) * returns.tail;
    if (n == 0) return out;
    if (cycle_map.empty()) {
        out.per_cycle.assign(n, 0.0);
        return out;
    }
    const std::int64_t cmin = cycle_map.begin()->first;
    const auto cwidth = static_cast<std::size_t>(cycle_map.rbegin()->first - cmin) + 1;
    check_cells(n * cwidth, limits.support_cap, "embedded_positivity_average");
    std::vector<double> cycle(cwidth, 0.0);
    for (const auto& [v, mass] : cycle_map) cycle[static_cast<std::size_t>(v - cmin)] = mass;

    std::int64_t cur_min = 0;
    std::vector<double> cur{1.0};
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<double> next(cur.size() + cwidth - 1, 0.0);
        for (std::size_t a = 0; a < cur.size(); ++a) {
            if (cur[a] == 0.0) continue;
            for (std::size_t b = 0; b < cwidth; ++b) next[a + b] += cur[a] * cycle[b];
        }
        cur = std::move(next);
        cur_min += cmin;
        double pos = 0.0;
        for (std::size_t a = 0; a < cur.size(); ++a) {
            if (cur_min + static_cast<std::int64_t>(a) > 0) pos += cur[a];
        }
        out.per_cycle.push_back(pos);
        sum += pos;
    }
    out.average = sum / static_cast<double>(n);
    return out;
}

LadderStructure ladder_epochs(std::span<const double> walk) {
    LadderStructure out;
    out.horizon = walk.size();
    double record = 0.0;
    for (std::size_t k = 0; k < walk.size(); ++k) {
        if (walk[k] > record) {
            record = walk[k];
            out.epochs.push_back(k + 1);
            out.heights.push_back(walk[k]);
        }
    }
    return out;
}

namespace {

// Depth-first enumeration of all length-n paths from one start state.
class PathEnumerator {
public:
    PathEnumerator(const Prepared& p, std::size_t n) : p_(p), n_(n) {}

    template <class Visit>
    void run(std::size_t i0, Visit&& visit) {
        frames.assign(n_ + 1, Frame{0, 0});
        walk(0, i0, 0, 1.0, visit);
    }

    std::uint64_t leaves() const noexcept { return leaves_; }

    // Per-depth path state, readable from the visitor.
    struct Frame {
        std::size_t state;
        std::int64_t index;
    };
    std::vector<Frame> frames;

private:
    template <class Visit>
    void walk(std::size_t depth, std::size_t state, std::int64_t index, double weight, Visit& visit) {
        frames[depth] = {state, index};
        if (depth == n_) {
            ++leaves_;
            visit(frames, weight);
            return;
        }
        for (const auto& e : p_.out[state]) walk(depth + 1, e.state, index + e.shift, weight * e.weight, visit);
    }

    const Prepared& p_;
    std::size_t n_;
    std::uint64_t leaves_ = 0;
};

void check_enumeration(std::size_t n, const ExactLimits& limits, const char* op) {
    if (n > limits.enumeration_cap) {
        std::ostringstream os;
        os << op << ": n = " << n << " exceeds enumeration_cap " << limits.enumeration_cap;
        throw ResourceError("enumeration_cap", os.str());
    }
}

}  // namespace

SpitzerIdentityReport spitzer_identity(const MrwModel& m, std::size_t i, std::size_t n, const ExactLimits& limits) {
    const auto p = prepare(m, "spitzer_identity");
    check_state(m, i);
    if (n == 0) throw InputError("spitzer_identity needs n >= 1");
    check_enumeration(n, limits, "spitzer_identity");

    SpitzerIdentityReport report;
    report.n = n;
    report.state = i;
    report.lhs = exact_law(m, i, n, limits).prob_positive_at(i);

    // On {tau_sigma(k) = n} we have sigma(k) = m (the number of returns by n),
    // so (n/k) * sigma(k) / tau_sigma(k) = m / k. A path contributes iff it ends
    // in i and its final embedded value is a strict record, which also forces
    // S_n > 0.
    double rhs = 0.0;
    PathEnumerator paths(p, n);
    paths.run(i, [&](const std::vector<PathEnumerator::Frame>& f, double w) {
        if (f[n].state != i) return;
        std::int64_t record = 0;
        std::size_t returns = 0, records = 0;
        bool last_is_record = false;
        for (std::size_t t = 1; t <= n; ++t) {
            if (f[t].state != i) continue;
            ++returns;
            const std::int64_t fine = p.grid.fine(f[t].index, static_cast<std::int64_t>(t));
            last_is_record = fine > record;
            if (last_is_record) {
                record = fine;
                ++records;
            }
        }
        if (last_is_record) rhs += w * static_cast<double>(returns) / static_cast<double>(records);
    });
    report.rhs = rhs;
    report.abs_diff = std::abs(report.lhs - report.rhs);
    report.paths = paths.leaves();
    return report;
}

std::vector<std::vector<double>> ladder_epoch_law(const MrwModel& m, std::size_t n, const ExactLimits& limits) {
    const auto p = prepare(m, "ladder_epoch_law");
    if (p.states != 1) throw InputError("ladder_epoch_law is defined for single-state models");
    // State: (records so far, gap = running max - S) in fine units, gap >= 0.
    std::int64_t max_drop = 0;
    std::vector<std::pair<std::int64_t, double>> steps;
    for (const auto& e : p.out[0]) {
        const std::int64_t f = p.grid.fine_step(e.shift);
        steps.emplace_back(f, e.weight);
        max_drop = std::max(max_drop, -f);
    }
    const auto gaps = static_cast<std::size_t>(static_cast<std::int64_t>(n) * max_drop) + 1;
    check_cells((n + 1) * gaps, limits.support_cap, "ladder_epoch_law");
    std::vector<std::vector<double>> law(n + 1, std::vector<double>(n + 1, 0.0));
    std::vector<double> cur((n + 1) * gaps, 0.0), next;
    cur[0] = 1.0;
    for (std::size_t t = 1; t <= n; ++t) {
        next.assign(cur.size(), 0.0);
        for (std::size_t k = 0; k < t; ++k) {
            for (std::size_t g = 0; g < gaps; ++g) {
                const double mass = cur[k * gaps + g];
                if (mass == 0.0) continue;
                for (const auto& [f, w] : steps) {
                    const std::int64_t gap = static_cast<std::int64_t>(g) - f;
                    if (gap < 0) {
                        next[(k + 1) * gaps] += mass * w;
                        law[k + 1][t] += mass * w;
                    } else {
                        next[k * gaps + static_cast<std::size_t>(gap)] += mass * w;
                    }
                }
            }
        }
        std::swap(cur, next);
    }
    return law;
}

double classic_spitzer_rhs(const MrwModel& m, std::size_t n, const ExactLimits& limits) {
    const auto law = ladder_epoch_law(m, n, limits);
    double rhs = 0.0;
    for (std::size_t k = 1; k <= n; ++k) rhs += static_cast<double>(n) / static_cast<double>(k) * law[k][n];
    return rhs;
}

BruteForceResult brute_force_law(const MrwModel& m, std::size_t i0, std::size_t n, const ExactLimits& limits) {
    const auto p = prepare(m, "brute_force_law");
    check_state(m, i0);
    check_enumeration(n, limits, "brute_force_law");
    BruteForceResult out;
    std::map<std::pair<std::size_t, std::int64_t>, double> cells;
    PathEnumerator paths(p, n);
    paths.run(i0, [&](const std::vector<PathEnumerator::Frame>& f, double w) {
        std::size_t count = 0;
        for (std::size_t t = 1; t <= n; ++t) {
            if (p.grid.fine(f[t].index, static_cast<std::int64_t>(t)) > 0) ++count;
        }
        cells[{f[n].state, f[n].index}] += w;
        out.occupation[{f[n].state, f[n].index, count}] += w;
    });
    out.path_count = paths.leaves();
    for (std::size_t i = 0; i < p.states; ++i) out.branching.push_back(p.out[i].size());

    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (const auto& [key, w] : cells) {
        lo = std::min(lo, key.second);
        hi = std::max(hi, key.second);
    }
    auto& law = out.law;
    law.steps = n;
    law.states = p.states;
    law.span = p.grid.span;
    law.offset = p.grid.offset;
    law.offset_num = p.grid.offset_num;
    law.offset_den = p.grid.offset_den;
    law.min_index = lo;
    law.width = static_cast<std::size_t>(hi - lo) + 1;
    law.mass.assign(law.states * law.width, 0.0);
    for (const auto& [key, w] : cells) law.mass[key.first * law.width + static_cast<std::size_t>(key.second - lo)] = w;
    return out;
}

void write_law_csv(const LatticeLaw& law, const MrwModel& m, const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t j = 0; j < law.states; ++j) {
        for (std::size_t x = 0; x < law.width; ++x) {
            const double mass = law.mass[j * law.width + x];
            if (mass == 0.0) continue;
            const std::int64_t index = law.min_index + static_cast<std::int64_t>(x);
            rows.push_back({std::to_string(law.steps), m.label(j), std::to_string(index), format_number(law.value(index)),
                            format_number(mass)});
        }
    }
    write_csv(path, {"n", "state", "lattice_index", "value", "probability"}, rows);
}

}  // namespace mrw
