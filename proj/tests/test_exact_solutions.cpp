#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "mkdv/exact_solutions.hpp"
#include "support/oracles.hpp"

using namespace mkdv;

TEST(Soliton, Examples) {
    EXPECT_DOUBLE_EQ(eval_soliton(1, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(eval_soliton(2, 0, 0), 2.0);
    EXPECT_DOUBLE_EQ(eval_soliton(1, 4, 4), 1.0);
}

TEST(Soliton, TranslationCovariance) {
    for (double x = -5; x <= 5; x += 0.37) {
        ExactSolutionSpec shifted{SolutionFamily::Soliton, 0, 1.3, 2.5, 0};
        EXPECT_DOUBLE_EQ(evaluate(shifted, x + 2.5, 0.4), eval_soliton(1.3, x, 0.4));
    }
}

TEST(Soliton, NoOverflowFarAway) {
    EXPECT_EQ(eval_soliton(1, 1e4, 0), 0.0);
    EXPECT_TRUE(std::isfinite(eval_soliton(2, -800, 0)));
}

TEST(Breather, EnvelopeBoundAlpha7) {
    double peak = 0;
    for (double x = -20; x <= 20; x += 1e-3) peak = std::max(peak, std::abs(eval_breather(7, 1, x, 0)));
    EXPECT_LE(peak, 2.0 + 1e-12);
    EXPECT_GT(peak, 1.9);
}

TEST(Breather, MatchesArctanForm) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ux(-10, 10), ut(-1, 1), ua(0.5, 7), ub(0.5, 1.5);
    for (int i = 0; i < 1000; ++i) {
        const double a = ua(rng), b = ub(rng), x = ux(rng), t = ut(rng);
        EXPECT_NEAR(eval_breather(a, b, x, t), oracle::breather_atan_form(a, b, x, t), 1e-10)
            << "a=" << a << " b=" << b << " x=" << x << " t=" << t;
    }
}

TEST(Breather, RejectsNonPositiveAlpha) {
    EXPECT_THROW(eval_breather(0, 1, 0, 0), std::invalid_argument);
    EXPECT_THROW(eval_breather(-1, 1, 0, 0), std::invalid_argument);
}

// The small-alpha breather approaches the double pole only after removing the
// translation introduced by its atan(b/a) phase offset.
TEST(Breather, SmallAlphaLimitIsDoublePole) {
    const double a = 1e-6;
    const auto sh = oracle::breather_limit_shift(a, 1.0);
    for (double t : {0.0, 1.0, 10.0}) {
        for (double x = -10; x <= 10; x += 0.05) {
            EXPECT_NEAR(eval_breather(a, 1, x + sh.s, t + sh.tau), eval_double_pole(1, x, t), 1e-4)
                << "x=" << x << " t=" << t;
        }
    }
}

TEST(Breather, LimitErrorShrinksWithAlpha) {
    double prev = 1e9;
    for (double a : {1e-2, 1e-3, 1e-4}) {
        const auto sh = oracle::breather_limit_shift(a, 1.0);
        double err = 0;
        for (double x = -10; x <= 10; x += 0.1) {
            err = std::max(err, std::abs(eval_breather(a, 1, x + sh.s, 1 + sh.tau) -
                                         eval_double_pole(1, x, 1)));
        }
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(ApproxBreather, Examples) {
    EXPECT_EQ(eval_approx_breather(7, 1, 0, 0), 0.0);
    double peak = 0, envelope = 0;
    for (double x = -20; x <= 20; x += 1e-4) {
        const double v = std::abs(eval_approx_breather(7, 1, x, 0));
        peak = std::max(peak, v);
        envelope = std::max(envelope, v * std::cosh(x));
    }
    EXPECT_NEAR(envelope, 2.0 / 7.0, 1e-6);
    EXPECT_LE(peak, 2.0 / 7.0);
}

namespace {

// Peak of |u| over one carrier period centred at x0.
template <class F>
double local_peak(F f, double x0, double period) {
    double m = 0;
    for (double x = x0 - period / 2; x <= x0 + period / 2; x += period / 200) m = std::max(m, std::abs(f(x)));
    return m;
}

} // namespace

// The two breather forms carry different amplitudes (2b against 2b^2/a), so
// they are compared through their peak-normalised envelopes.
TEST(ApproxBreather, EnvelopeMatchesExactBreatherAtLargeAlpha) {
    const double a = 20, b = 1, period = 2 * std::numbers::pi / a;
    auto exact = [&](double x) { return eval_breather(a, b, x, 0); };
    auto approx = [&](double x) { return eval_approx_breather(a, b, x, 0); };
    const double pe = local_peak(exact, 0, 4 * period);
    const double pa = local_peak(approx, 0, 4 * period);
    EXPECT_NEAR(pa, 2 * b * b / a, 0.01 * 2 * b * b / a);
    EXPECT_NEAR(pe, 2 * b, 0.01 * 2 * b);
    for (double x0 = -20; x0 <= 20; x0 += 0.5) {
        EXPECT_NEAR(local_peak(exact, x0, period) / pe, local_peak(approx, x0, period) / pa, 0.05)
            << "x0=" << x0;
    }
}

TEST(DoublePole, Examples) {
    EXPECT_DOUBLE_EQ(eval_double_pole(1, 0, 0), 2.0);
    for (double x = 0; x < 30; x += 0.25) EXPECT_DOUBLE_EQ(eval_double_pole(1, x, 0), eval_double_pole(1, -x, 0));
}

TEST(DoublePole, StableFormMatchesDirectFormula) {
    for (double b : {0.5, 1.0, 1.7}) {
        for (double t : {0.0, 0.5, 3.0}) {
            for (double x = -15; x <= 15; x += 0.1) {
                const double ref = oracle::double_pole_direct(b, x, t);
                EXPECT_NEAR(eval_double_pole(b, x, t), ref, 1e-12 * (1 + std::abs(ref)));
            }
        }
    }
}

TEST(DoublePole, FiniteAtLongTimes) {
    for (double x : {-1e4, 0.0, 4990.0, 5000.0, 1e5}) EXPECT_TRUE(std::isfinite(eval_double_pole(1, x, 5000)));
}

TEST(DoublePole, HumpSeparationAtT5000) {
    double xmax = 0, xmin = 0, vmax = -1, vmin = 1;
    for (double x = 4950; x <= 5050; x += 1e-3) {
        const double v = eval_double_pole(1, x, 5000);
        if (v > vmax) { vmax = v; xmax = x; }
        if (v < vmin) { vmin = v; xmin = x; }
    }
    const double l = theoretical_separation(1, 5000);
    EXPECT_NEAR(std::abs(xmax - xmin), l, 0.05 * l);
}

TEST(Separation, Examples) {
    EXPECT_NEAR(theoretical_separation(1, std::exp(1.0) / 4), 2.0, 1e-14);
    EXPECT_NEAR(theoretical_separation(1, 5000), 2 * std::log(20000.0), 1e-12);
    EXPECT_NEAR(theoretical_separation(1, 5000), 19.807, 1e-3);
    EXPECT_NEAR(theoretical_separation(2, std::exp(1.0) / 32), 1.0, 1e-14);
}

TEST(Separation, RejectsPreAsymptoticTimes) {
    EXPECT_THROW(theoretical_separation(1, 0.25), std::domain_error);
    EXPECT_THROW(theoretical_separation(1, 0.0), std::domain_error);
    EXPECT_THROW(theoretical_separation(0, 10), std::invalid_argument);
}

TEST(Residual, Examples) {
    EXPECT_LE(std::abs(mkdv_residual({SolutionFamily::Soliton, 0, 1}, 0.3, 0.7, 1e-3)), 1e-5);
    EXPECT_LE(std::abs(mkdv_residual({SolutionFamily::Breather, 2, 1}, 1.1, 0.4, 1e-3)), 1e-4);
    EXPECT_LE(std::abs(mkdv_residual({SolutionFamily::DoublePole, 0, 1}, -2, 3, 1e-3)), 1e-5);
}

TEST(Residual, SecondOrderUnderRefinement) {
    const std::vector<double> hs = {1e-2, 5e-3, 2.5e-3};
    struct Probe {
        ExactSolutionSpec spec;
        double x, t;
    };
    const Probe probes[] = {{{SolutionFamily::Soliton, 0, 1}, 0.3, 0.7},
                            {{SolutionFamily::Breather, 2, 1}, 1.1, 0.4},
                            {{SolutionFamily::DoublePole, 0, 1}, -2, 3}};
    for (const auto& p : probes) {
        std::vector<double> err;
        for (double h : hs) err.push_back(std::abs(mkdv_residual(p.spec, p.x, p.t, h)));
        EXPECT_GE(oracle::loglog_slope(hs, err), 1.9) << to_string(p.spec.family);
    }
    EXPECT_THROW(mkdv_residual({SolutionFamily::Soliton, 0, 1}, 0, 0, 0), std::invalid_argument);
}

TEST(ExactSpec, Validation) {
    EXPECT_THROW((ExactSolutionSpec{SolutionFamily::Soliton, 0, 0}.validate()), std::invalid_argument);
    EXPECT_THROW((ExactSolutionSpec{SolutionFamily::Breather, 0, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((ExactSolutionSpec{SolutionFamily::ApproxBreather, -1, 1}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((ExactSolutionSpec{SolutionFamily::DoublePole, 0, 1}.validate()));
    EXPECT_EQ(parse_family("double-pole"), SolutionFamily::DoublePole);
    EXPECT_THROW(parse_family("kink"), std::invalid_argument);
}

TEST(ExactSpec, AnalyticDerivativeMatchesDifferences) {
    const ExactSolutionSpec specs[] = {{SolutionFamily::Soliton, 0, 1.2, 0.3, 0},
                                       {SolutionFamily::DoublePole, 0, 1, 0, 0},
                                       {SolutionFamily::DoublePole, 0, 0.8, 0, 7},
                                       {SolutionFamily::ApproxBreather, 5, 1, 0, 0}};
    const double h = 1e-5;
    for (const auto& s : specs) {
        for (double x = -8; x <= 8; x += 0.3) {
            const double fd = (evaluate(s, x + h, 0.2) - evaluate(s, x - h, 0.2)) / (2 * h);
            EXPECT_NEAR(*evaluate_dx(s, x, 0.2), fd, 1e-7) << to_string(s.family) << " x=" << x;
        }
    }
    EXPECT_FALSE(evaluate_dx({SolutionFamily::Breather, 2, 1}, 0, 0).has_value());
}
