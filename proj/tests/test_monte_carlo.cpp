#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mrw/error.hpp"
#include "mrw/exact.hpp"
#include "mrw/monte_carlo.hpp"
#include "mrw/rho.hpp"
#include "test_models.hpp"

using namespace mrw;
using namespace mrw::testing;

namespace {

McOptions simulated() {
    McOptions o;
    o.allow_exact = false;
    return o;
}

McOptions threads(unsigned t) {
    McOptions o = simulated();
    o.threads = t;
    return o;
}

}  // namespace

TEST(Returns, AlternatingCycles) {
    const auto t = simulate(alternating(), 0, 20, 1);
    const auto r = extract_returns(t, 0);
    ASSERT_EQ(r.returns(), 10u);
    for (std::size_t k = 0; k < r.returns(); ++k) {
        EXPECT_EQ(r.epochs[k], 2 * (k + 1));
        EXPECT_EQ(r.sojourns[k], 2u);
        EXPECT_EQ(r.drops[k], 0.0);
        EXPECT_EQ(r.rises[k], 1.0);
    }
}

TEST(Returns, SingleStateEveryStepReturns) {
    const auto t = simulate(drift_walk(), 0, 200, 4);
    const auto r = extract_returns(t, 0);
    ASSERT_EQ(r.returns(), 200u);
    for (std::size_t k = 0; k < 200; ++k) {
        const double x = t.increments[k];
        EXPECT_EQ(r.epochs[k], k + 1);
        EXPECT_EQ(r.sojourns[k], 1u);
        EXPECT_EQ(r.drops[k], std::max(0.0, -x));
        EXPECT_EQ(r.rises[k], std::max(0.0, x));
    }
}

TEST(Returns, NoReturn) {
    Trajectory t;
    t.initial_state = 0;
    t.states = {0, 1, 1, 1};
    t.increments = {1, -1, 1};
    t.sums = {0, 1, 0, 1};
    const auto r = extract_returns(t, 0);
    EXPECT_EQ(r.returns(), 0u);
    EXPECT_TRUE(r.sojourns.empty());
}

TEST(Returns, SandwichAndExcursionBounds) {
    for (const auto& m : {symmetric_2state(), asymmetric_3state(), alternating_random(), gaussian_2state()}) {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const std::size_t n = 300;
            const auto longer = simulate(m, 0, 3 * n, seed);
            Trajectory t = longer;
            t.states.resize(n + 1);
            t.sums.resize(n + 1);
            t.increments.resize(n);
            const auto r = extract_returns(t, 0);
            const auto rl = extract_returns(longer, 0);
            const std::size_t lambda = r.returns();
            std::size_t sum = 0;
            for (const auto c : r.sojourns) sum += c;
            EXPECT_LE(sum, n);
            const std::size_t tau_lo = lambda ? r.epochs.back() : 0;
            EXPECT_LE(tau_lo, n);
            ASSERT_GT(rl.returns(), lambda);
            const std::size_t tau_hi = rl.epochs[lambda];
            EXPECT_GT(sum + rl.sojourns[lambda], n);
            EXPECT_GE(tau_hi, n);
            // N^> is monotone, so the count sandwich follows from the time sandwich.
            auto count = [&](std::size_t upto) {
                std::size_t c = 0;
                for (std::size_t k = 1; k <= upto; ++k) c += longer.sums[k] > 0.0;
                return c;
            };
            EXPECT_LE(count(tau_lo), count(n));
            EXPECT_LE(count(n), count(tau_hi));
            std::size_t start = 0;
            for (std::size_t k = 0; k < rl.returns(); ++k) {
                const double base = longer.sums[start];
                for (std::size_t j = start + 1; j <= rl.epochs[k]; ++j) {
                    const double rel = longer.sums[j] - base;
                    EXPECT_LE(-rl.drops[k], rel);
                    EXPECT_LE(rel, rl.rises[k]);
                }
                start = rl.epochs[k];
            }
        }
    }
}

TEST(Summarize, MeanAndStandardError) {
    const std::vector<double> v{1, 2, 3, 4};
    const auto r = summarize(v, 17);
    EXPECT_DOUBLE_EQ(r.estimate, 2.5);
    EXPECT_NEAR(r.standard_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
    EXPECT_EQ(r.paths, 4u);
    EXPECT_EQ(r.seed, 17u);
    EXPECT_FALSE(r.exact);
}

TEST(SpitzerAverage, Examples) {
    const auto pos = spitzer_average(all_positive(), 0, 100, 50, 1, simulated());
    EXPECT_EQ(pos.estimate, 1.0);
    const auto ex = spitzer_average(fair_walk(), 0, 2, 10, 1);
    EXPECT_TRUE(ex.exact);
    EXPECT_DOUBLE_EQ(ex.estimate, 0.375);
    EXPECT_THROW(spitzer_average(fair_walk(), 3, 2, 10, 1), InputError);
}

TEST(SpitzerAverage, ReflectionComplement) {
    const auto m = asymmetric_3state();
    const std::size_t n = 200;
    const auto a = spitzer_average(m, 1, n, 20'000, 3, simulated());
    const auto b = spitzer_average(reflected(m), 1, n, 20'000, 4, simulated());
    const auto prof = sign_profile(m, 1, n);
    double zero = 0.0;
    for (std::size_t k = 1; k <= n; ++k) zero += prof.zero[k];
    zero /= static_cast<double>(n);
    const double se = std::hypot(a.standard_error, b.standard_error);
    EXPECT_NEAR(a.estimate + b.estimate + zero, 1.0, 3 * se);
    // Same seed gives the mirrored paths, so the identity is then exact up to the zero term.
    const auto c = spitzer_average(reflected(m), 1, n, 20'000, 3, simulated());
    EXPECT_NEAR(a.estimate + c.estimate, 1.0 - zero, 4 * a.standard_error);
}

TEST(SpitzerAverage, SimulationTracksExact) {
    // Exact-vs-MC: at least 99 of 100 seeded runs within 4 standard errors.
    const auto m = asymmetric_3state();
    const std::size_t n = 40;
    const double exact = spitzer_average(m, 0, n, 1, 0).estimate;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = spitzer_average(m, 0, n, 2000, seed, simulated());
        hits += std::abs(r.estimate - exact) <= 4 * r.standard_error;
    }
    EXPECT_GE(hits, 99);
}

TEST(StrongCurve, SimulationTracksExact) {
    const auto m = alternating_random();
    const std::vector<std::size_t> grid{5, 20, 60};
    const auto exact = strong_spitzer_curve(m, 0, grid, 1, 0);
    int hits = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = strong_spitzer_curve(m, 0, grid, 2000, seed, simulated());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            ++total;
            hits += std::abs(r[g].estimate - exact[g].estimate) <= 4 * r[g].standard_error;
        }
    }
    EXPECT_GE(hits, total * 99 / 100);
}

TEST(StrongCurve, Examples) {
    EXPECT_TRUE(strong_spitzer_curve(fair_walk(), 0, std::vector<std::size_t>{}, 10, 1).empty());
    const std::vector<std::size_t> g2000{2000};
    EXPECT_GE(strong_spitzer_curve(drift_walk(), 0, g2000, 10'000, 1, simulated())[0].estimate, 0.99);
    EXPECT_GE(strong_spitzer_curve(drift_walk(), 0, g2000, 10, 1)[0].estimate, 0.99);

    // Symmetry: P(S_n > 0) <= 1/2 <= P(S_n > 0) + P(S_n = 0).
    const auto m = symmetric_2state();
    const std::vector<std::size_t> grid{100, 1000, 10'000};
    const auto curve = strong_spitzer_curve(m, 0, grid, 4000, 9, simulated());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double zero = grid[g] <= 2000 ? exact_law(m, 0, grid[g]).prob_zero()
                                            : 2.0 / std::sqrt(2.0 * M_PI * static_cast<double>(grid[g]));
        EXPECT_LE(curve[g].estimate - 3 * curve[g].standard_error, 0.5);
        EXPECT_GE(curve[g].estimate + zero + 3 * curve[g].standard_error, 0.5);
    }
}

TEST(EmbeddedSpitzer, Examples) {
    EXPECT_EQ(embedded_spitzer_average(alternating(), 0, 100, 20, 1).estimate, 0.0);
    EXPECT_EQ(embedded_spitzer_average(all_positive(), 1, 100, 20, 1).estimate, 1.0);
}

TEST(EmbeddedSpitzer, AgreesWithSpitzerAverage) {
    const auto m = symmetric_2state();
    const auto emb = embedded_spitzer_average(m, 0, 2000, 4000, 5);
    const auto sp = spitzer_average(m, 0, 2000, 4000, 6, simulated());
    EXPECT_NEAR(emb.estimate, sp.estimate, 3 * std::hypot(emb.standard_error, sp.standard_error));
}

TEST(EmbeddedSpitzer, ConvolutionMatchesSimulation) {
    for (const auto& m : {asymmetric_3state(), alternating_random(), offset_2state()}) {
        const auto exact = embedded_positivity_average(m, 0, 60, 400);
        EXPECT_LT(exact.neglected_mass, 1e-9);
        const auto mc = embedded_spitzer_average(m, 0, 60, 20'000, 8);
        EXPECT_NEAR(mc.estimate, exact.average, 3 * mc.standard_error + exact.neglected_mass);
    }
}

TEST(EmbeddedSpitzer, StepCapBudget) {
    McOptions o;
    o.step_cap_factor = 0.5;
    EXPECT_THROW(embedded_spitzer_average(asymmetric_3state(), 0, 100, 100, 1, o), BudgetError);
}

TEST(Occupation, DegenerateSamples) {
    for (const double v : occupation_fraction_samples(all_positive(), 0, 100, 50, 1)) EXPECT_EQ(v, 1.0);
    for (const double v : occupation_fraction_samples(all_negative(), 0, 100, 50, 1)) EXPECT_EQ(v, 0.0);
}

TEST(Occupation, MeanMatchesExactCountLaw) {
    const auto m = asymmetric_3state();
    const std::size_t n = 100;
    const auto law = occupation_law(m, 2, n).count_law();
    double exact = 0.0;
    for (std::size_t k = 0; k <= n; ++k) exact += static_cast<double>(k) / n * law[k];
    const auto s = occupation_fraction_samples(m, 2, n, 20'000, 12);
    const auto r = summarize(s, 12);
    EXPECT_NEAR(r.estimate, exact, 4 * r.standard_error);
}

TEST(Determinism, IndependentOfThreadCount) {
    const auto m = asymmetric_3state();
    const auto a = occupation_fraction_samples(m, 0, 500, 333, 21, threads(1));
    const auto b = occupation_fraction_samples(m, 0, 500, 333, 21, threads(4));
    const auto c = occupation_fraction_samples(m, 0, 500, 333, 21, threads(7));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    const auto e1 = embedded_spitzer_average(m, 1, 200, 301, 2, threads(1));
    const auto e3 = embedded_spitzer_average(m, 1, 200, 301, 2, threads(3));
    EXPECT_EQ(e1.estimate, e3.estimate);
    EXPECT_EQ(e1.standard_error, e3.standard_error);
    const auto b1 = boundary_occupation(m, 0, 100, 101, 2, threads(1));
    const auto b5 = boundary_occupation(m, 0, 100, 101, 2, threads(5));
    EXPECT_EQ(b1.total.estimate, b5.total.estimate);
    const auto g1 = clt_check(gaussian_2state(), 0, 100, 57, 3, threads(1));
    const auto g2 = clt_check(gaussian_2state(), 0, 100, 57, 3, threads(2));
    EXPECT_EQ(g1.samples, g2.samples);
    EXPECT_EQ(g1.theta2, g2.theta2);
}

TEST(Boundary, Examples) {
    const auto alt = boundary_occupation(alternating(), 0, 50, 20, 1);
    EXPECT_TRUE(alt.null_homologous);
    EXPECT_EQ(alt.total.estimate, 2.0);
    EXPECT_EQ(alt.above.estimate, 0.0);

    // Only the first cycle starts at level 0; later cycles start strictly above
    // with no drop below 0.
    const std::size_t n = 40;
    const auto pos = boundary_occupation(all_positive(), 0, n, 4000, 2);
    const auto sim = [&] {
        double s = 0;
        for (std::size_t p = 0; p < 4000; ++p) {
            CounterRng rng(2, p);
            const PathSampler sampler(all_positive());
            std::size_t state = 0, chi = 0;
            do {
                state = sampler.step(state, rng).next;
                ++chi;
            } while (state != 0);
            s += static_cast<double>(chi);
        }
        return s / 4000 / static_cast<double>(n);
    }();
    EXPECT_NEAR(pos.total.estimate, sim, 1e-13);
    EXPECT_NEAR(pos.total.estimate, 2.0 / n, 0.01);
    EXPECT_FALSE(pos.null_homologous);
}

TEST(Boundary, DecaysOnSymmetricModel) {
    const auto m = symmetric_2state();
    const auto small = boundary_occupation(m, 0, 100, 2000, 3);
    const auto large = boundary_occupation(m, 0, 3000, 2000, 3);
    EXPECT_LT(large.total.estimate, small.total.estimate);
    EXPECT_NEAR(large.total.estimate, large.above.estimate + large.below.estimate, 1e-15);
}

TEST(Clt, Examples) {
    EXPECT_TRUE(clt_check(fair_walk(), 0, 100, 0, 1).samples.empty());
    const auto fw = clt_check(fair_walk(), 0, 10'000, 200, 1);
    EXPECT_NEAR(fw.theta2, 1.0, 1e-12);  // |X| = 1 always
    const auto alt = clt_check(alternating(), 0, 1001, 100, 1);
    for (const double s : alt.samples) EXPECT_LE(std::abs(s), 2.0 / std::sqrt(1001.0));
    const auto sym = clt_check(asymmetric_3state(), 0, 5000, 400, 1);
    EXPECT_GT(sym.theta2, 0.0);
    EXPECT_GT(sym.cycles, 400u * 1500u);
}

TEST(Rho, AllPositive) {
    RhoConfig c;
    c.n = 200;
    c.paths = 200;
    const auto r = rho_report(all_positive(), 0, c);
    ASSERT_EQ(r.lines.size(), 5u);
    for (const auto& l : r.lines) EXPECT_EQ(l.result.estimate, 1.0) << l.name;
    EXPECT_TRUE(r.pass);
}

TEST(Rho, SymmetricModel) {
    const auto r = rho_report(symmetric_2state(), 0);
    for (const auto& l : r.lines) EXPECT_NEAR(l.result.estimate, 0.5, 0.03) << l.name;
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.line("spitzer_pi").estimate, r.line("spitzer").estimate, 0.03);
    EXPECT_THROW(r.line("nope"), InputError);
}
