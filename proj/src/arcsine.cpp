#include "mrw/arcsine.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mrw/error.hpp"
#include "mrw/rng.hpp"

namespace mrw {

namespace {

constexpr double kFractionTolerance = 1e-15;
constexpr int kFractionCap = 500;
constexpr double kQuantileTolerance = 1e-12;  // in probability

double log_beta(double a, double b) {
    // Closed form on the arcsine family avoids lgamma rounding.
    if (std::abs(a + b - 1.0) < 1e-15) return std::log(std::numbers::pi / std::sin(std::numbers::pi * a));
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kFractionCap; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= kFractionTolerance) return h;
    }
    throw SolverError("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw InputError("incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_fraction(a, b, x) / a;
    return 1.0 - std::exp(log_front) * beta_fraction(b, a, 1.0 - x) / b;
}

ArcsineLaw::ArcsineLaw(double theta) : theta_(theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw InputError("arcsine parameter must lie in [0, 1]");
}

double ArcsineLaw::density(double x) const {
    if (theta_ == 0.0 || theta_ == 1.0) throw InputError("AS(0) and AS(1) are point masses without density");
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return std::sin(std::numbers::pi * theta_) / std::numbers::pi * std::pow(x, theta_ - 1.0) *
           std::pow(1.0 - x, -theta_);
}

double ArcsineLaw::cdf(double x) const {
    if (theta_ == 0.0) return x >= 0.0 ? 1.0 : 0.0;
    if (theta_ == 1.0) return x >= 1.0 ? 1.0 : 0.0;
    return regularized_incomplete_beta(theta_, 1.0 - theta_, x);
}

double ArcsineLaw::cdf_left(double x) const {
    if (theta_ == 0.0) return x > 0.0 ? 1.0 : 0.0;
    if (theta_ == 1.0) return x > 1.0 ? 1.0 : 0.0;
    return cdf(x);
}

double ArcsineLaw::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("quantile level must lie in [0, 1]");
    if (theta_ == 0.0) return 0.0;
    if (theta_ == 1.0) return 1.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    // Bisection until the CDF matches p or the bracket collapses to adjacent
    // doubles; the heavy endpoint tails make an x-tolerance alone too coarse.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f = cdf(mid);
        if (std::abs(f - p) <= kQuantileTolerance * 0.1) return mid;
        (f < p ? lo : hi) = mid;
    }
    return std::abs(cdf(lo) - p) < std::abs(cdf(hi) - p) ? lo : hi;
}

std::vector<double> ArcsineLaw::sample(std::size_t count, std::uint64_t seed) const {
    std::vector<double> out(count);
    CounterRng rng(seed, 0);
    for (auto& v : out) v = quantile(rng.uniform());
    return out;
}

double as_density(double theta, double x) { return ArcsineLaw(theta).density(x); }
double as_cdf(double theta, double x) { return ArcsineLaw(theta).cdf(x); }
double as_quantile(double theta, double p) { return ArcsineLaw(theta).quantile(p); }
std::vector<double> as_sample(double theta, std::size_t count, std::uint64_t seed) {
    return ArcsineLaw(theta).sample(count, seed);
}

}  // namespace mrw
