#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mrw {

// I_x(a, b), continued fraction with the usual symmetry switch at
// x = (a + 1) / (a + b + 2).
double regularized_incomplete_beta(double a, double b, double x);

// Generalized arcsine law AS(theta): point mass at 0 for theta = 0, at 1 for
// theta = 1, otherwise Beta(theta, 1 - theta) with density
// sin(pi theta) / pi * x^(theta - 1) * (1 - x)^(-theta) on (0, 1).
class ArcsineLaw {
public:
    explicit ArcsineLaw(double theta);

    double theta() const noexcept { return theta_; }
    double mean() const noexcept { return theta_; }

    // Throws InputError for theta in {0, 1}; 0 outside (0, 1).
    double density(double x) const;
    double cdf(double x) const;
    double cdf_left(double x) const;  // P(X < x)
    // q with |cdf(q) - p| <= 1e-13 (or the closest double bracket).
    double quantile(double p) const;
    std::vector<double> sample(std::size_t count, std::uint64_t seed) const;

private:
    double theta_;
};

double as_density(double theta, double x);
double as_cdf(double theta, double x);
double as_quantile(double theta, double p);
std::vector<double> as_sample(double theta, std::size_t count, std::uint64_t seed);

}  // namespace mrw
