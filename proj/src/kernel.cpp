#include "mrw/kernel.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace mrw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPmfTolerance = 1e-12;

}  // namespace

std::string kernel_defect(const StepKernel& k) {
    return std::visit(
        overloaded{
            [](const PointKernel& p) -> std::string {
                return std::isfinite(p.value) ? "" : "point value is not finite";
            },
            [](const LatticeKernel& l) -> std::string {
                if (!std::isfinite(l.span) || l.span <= 0.0) return "lattice span must be > 0";
                if (!std::isfinite(l.offset)) return "lattice offset is not finite";
                if (l.pmf.empty()) return "lattice pmf is empty";
                std::set<std::int64_t> seen;
                double total = 0.0;
                for (const auto& [index, p] : l.pmf) {
                    if (!std::isfinite(p) || p < 0.0) return "lattice pmf has a negative or non-finite mass";
                    if (!seen.insert(index).second) return "lattice pmf repeats an atom";
                    total += p;
                }
                if (std::abs(total - 1.0) > kPmfTolerance) {
                    std::ostringstream os;
                    os << "lattice pmf sums to " << total;
                    return os.str();
                }
                return "";
            },
            [](const GaussianKernel& g) -> std::string {
                if (!std::isfinite(g.mean)) return "gaussian mean is not finite";
                if (!std::isfinite(g.stddev) || g.stddev <= 0.0) return "gaussian stddev must be > 0";
                return "";
            }},
        k);
}

bool has_finite_support(const StepKernel& k) { return !std::holds_alternative<GaussianKernel>(k); }

std::vector<Atom> kernel_atoms(const StepKernel& k) {
    std::vector<Atom> atoms;
    if (const auto* p = std::get_if<PointKernel>(&k)) {
        atoms.push_back({p->value, 1.0});
    } else if (const auto* l = std::get_if<LatticeKernel>(&k)) {
        for (const auto& [index, prob] : l->pmf) {
            if (prob > 0.0) atoms.push_back({l->offset + static_cast<double>(index) * l->span, prob});
        }
    }
    return atoms;
}

std::optional<double> point_value(const StepKernel& k) {
    if (const auto* p = std::get_if<PointKernel>(&k)) return p->value;
    if (std::holds_alternative<LatticeKernel>(k)) {
        const auto atoms = kernel_atoms(k);
        if (atoms.size() == 1) return atoms.front().value;
    }
    return std::nullopt;
}

double kernel_mean(const StepKernel& k) {
    if (const auto* g = std::get_if<GaussianKernel>(&k)) return g->mean;
    double m = 0.0;
    for (const auto& a : kernel_atoms(k)) m += a.value * a.probability;
    return m;
}

StepKernel negated(const StepKernel& k) {
    return std::visit(
        overloaded{[](const PointKernel& p) -> StepKernel { return PointKernel{-p.value}; },
                   [](const LatticeKernel& l) -> StepKernel {
                       LatticeKernel out{l.span, -l.offset, {}};
                       out.pmf.reserve(l.pmf.size());
                       for (const auto& [index, p] : l.pmf) out.pmf.emplace_back(-index, p);
                       return out;
                   },
                   [](const GaussianKernel& g) -> StepKernel { return GaussianKernel{-g.mean, g.stddev}; }},
        k);
}

bool kernels_close(const StepKernel& a, const StepKernel& b, double tol) {
    if (a.index() != b.index()) return false;
    if (const auto* pa = std::get_if<PointKernel>(&a)) {
        return std::abs(pa->value - std::get<PointKernel>(b).value) <= tol;
    }
    if (const auto* ga = std::get_if<GaussianKernel>(&a)) {
        const auto& gb = std::get<GaussianKernel>(b);
        return std::abs(ga->mean - gb.mean) <= tol && std::abs(ga->stddev - gb.stddev) <= tol;
    }
    const auto& la = std::get<LatticeKernel>(a);
    const auto& lb = std::get<LatticeKernel>(b);
    if (std::abs(la.span - lb.span) > tol || std::abs(la.offset - lb.offset) > tol) return false;
    if (la.pmf.size() != lb.pmf.size()) return false;
    for (std::size_t n = 0; n < la.pmf.size(); ++n) {
        if (la.pmf[n].first != lb.pmf[n].first) return false;
        if (std::abs(la.pmf[n].second - lb.pmf[n].second) > tol) return false;
    }
    return true;
}

std::string describe(const StepKernel& k) {
    std::ostringstream os;
    std::visit(overloaded{[&](const PointKernel& p) { os << "Point(" << p.value << ")"; },
                          [&](const LatticeKernel& l) {
                              os << "Lattice(h=" << l.span << ", c=" << l.offset << ", {";
                              for (std::size_t n = 0; n < l.pmf.size(); ++n) {
                                  os << (n ? ", " : "") << l.pmf[n].first << ":" << l.pmf[n].second;
                              }
                              os << "})";
                          },
                          [&](const GaussianKernel& g) { os << "Gaussian(" << g.mean << ", " << g.stddev << ")"; }},
               k);
    return os.str();
}

}  // namespace mrw
