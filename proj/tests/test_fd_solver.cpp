#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mkdv/exact_solutions.hpp"
#include "mkdv/fd_solver.hpp"
#include "mkdv/invariants.hpp"
#include "support/oracles.hpp"

using namespace mkdv;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-amp, amp);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(const std::vector<double>& a) {
    double m = 0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Eigen::VectorXd as_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

const OperatorKind kAllKinds[] = {OperatorKind::D1Plus, OperatorKind::D1Minus, OperatorKind::D1Central,
                                  OperatorKind::D2Central, OperatorKind::D3Central};

} // namespace

TEST(DifferenceOperator, AnnihilatesConstants) {
    const auto g = make_grid(3, 20);
    const std::vector<double> c(20, 2.5);
    for (auto k : kAllKinds) EXPECT_LE(max_abs(build_operator(k, g).apply(c)), 1e-10);
}

TEST(DifferenceOperator, RejectsTinyGrid) {
    EXPECT_THROW(build_operator(OperatorKind::D3Central, make_grid(1, 4)), std::invalid_argument);
}

TEST(DifferenceOperator, CentralFirstDerivativeIsSecondOrder) {
    const double L = 10;
    std::vector<double> h, err;
    for (std::size_t n : {32u, 64u, 128u, 256u}) {
        const auto g = make_grid(L, n);
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(std::numbers::pi * g.node(i) / L);
        const auto du = build_operator(OperatorKind::D1Central, g).apply(u);
        double e = 0;
        for (std::size_t i = 0; i < n; ++i) {
            e = std::max(e, std::abs(du[i] - std::numbers::pi / L * std::cos(std::numbers::pi * g.node(i) / L)));
        }
        h.push_back(g.dx());
        err.push_back(e);
    }
    EXPECT_NEAR(oracle::loglog_slope(h, err), 2.0, 0.05);
}

TEST(DifferenceOperator, ThirdEqualsComposedFirstAndSecond) {
    const auto g = make_grid(2, 40);
    const auto d1 = build_operator(OperatorKind::D1Central, g);
    const auto d2 = build_operator(OperatorKind::D2Central, g);
    const auto d3 = build_operator(OperatorKind::D3Central, g);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto u = random_vector(40, s);
        const auto a = d3.apply(u);
        const auto b = d1.apply(d2.apply(u));
        for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * max_abs(a));
    }
}

TEST(DifferenceOperator, SymmetryIdentities) {
    const auto g = make_grid(4, 64);
    const auto d1 = build_operator(OperatorKind::D1Central, g);
    const auto d2 = build_operator(OperatorKind::D2Central, g);
    const auto d3 = build_operator(OperatorKind::D3Central, g);
    const auto dp = build_operator(OperatorKind::D1Plus, g);
    const auto dm = build_operator(OperatorKind::D1Minus, g);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto u = random_vector(64, 2 * s), v = random_vector(64, 2 * s + 1);
        const double scale1 = std::sqrt(dot(u, u) * dot(v, v)) / g.dx();
        EXPECT_NEAR(dot(d1.apply(u), v), -dot(u, d1.apply(v)), 1e-12 * scale1);
        EXPECT_NEAR(dot(d2.apply(u), v), dot(u, d2.apply(v)), 1e-12 * scale1 / g.dx());
        EXPECT_NEAR(dot(d3.apply(u), v), -dot(u, d3.apply(v)), 1e-12 * scale1 / (g.dx() * g.dx()));
        // D3c^T D2c is antisymmetric: <D3c u, D2c u> = 0.
        EXPECT_NEAR(dot(d3.apply(u), d2.apply(u)), 0.0, 1e-12 * dot(u, u) / std::pow(g.dx(), 5));
    }
    for (std::size_t i = 0; i < 64; ++i) {
        for (std::size_t j = 0; j < 64; ++j) EXPECT_EQ(dm.entry(i, j), -dp.entry(j, i));
    }
}

// Dense references built only from the forward difference and the algebraic
// identities linking the five operators.
TEST(DifferenceOperator, MatchesDenseReference) {
    for (std::size_t n : {6u, 16u, 64u}) {
        const auto g = make_grid(1.5, n);
        const auto ops = oracle::dense_operators(n, g.dx());
        const Eigen::MatrixXd* dense[] = {&ops.d1p, &ops.d1m, &ops.d1c, &ops.d2c, &ops.d3c};
        for (int k = 0; k < 5; ++k) {
            const auto op = build_operator(kAllKinds[k], g);
            Eigen::MatrixXd m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = op.entry(i, j);
            EXPECT_LE((m - *dense[k]).cwiseAbs().maxCoeff(), 1e-12 * dense[k]->cwiseAbs().maxCoeff())
                << "kind " << k << " n " << n;
            const auto u = random_vector(n, 99 + n);
            const Eigen::VectorXd ref = *dense[k] * as_eigen(u);
            const Eigen::VectorXd got = as_eigen(op.apply(u));
            EXPECT_LE((ref - got).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff() + 1e-14);
        }
    }
}

TEST(FdSolver, ShiftedSolveMatchesDenseLu) {
    for (std::size_t n : {6u, 32u, 64u}) {
        const auto g = make_grid(3.0, n);
        for (double dt : {0.01, 0.04}) {
            FdSolver solver(g, {Nonlinearity::M2, dt});
            const auto ops = oracle::dense_operators(n, g.dx());
            const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) + 0.5 * dt * ops.d3c;
            const auto rhs = random_vector(n, n);
            const Eigen::VectorXd ref = a.partialPivLu().solve(as_eigen(rhs));
            const Eigen::VectorXd got = as_eigen(solver.solve_shifted(rhs));
            EXPECT_LE((ref - got).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
        }
    }
}

TEST(FdSolver, ApplyMTrivialFields) {
    const auto g = make_grid(5, 50);
    for (auto nl : {Nonlinearity::M1, Nonlinearity::M2}) {
        FdSolver s(g, {nl, 0.01});
        EXPECT_EQ(max_abs(s.apply_M(std::vector<double>(50, 0.0))), 0.0);
        EXPECT_LE(max_abs(s.apply_M(std::vector<double>(50, 0.8))), 1e-12);
    }
}

TEST(FdSolver, ApplyMMatchesDenseFormula) {
    const std::size_t n = 32;
    const auto g = make_grid(2, n);
    const auto ops = oracle::dense_operators(n, g.dx());
    const auto u = random_vector(n, 3);
    const Eigen::VectorXd e = as_eigen(u);
    const Eigen::VectorXd cube = e.array().cube();
    const Eigen::VectorXd sq = e.array().square();
    const Eigen::VectorXd m1 = -ops.d3c * e - 2.0 * ops.d1c * cube;
    const Eigen::VectorXd m2 = -ops.d3c * e - 3.0 * e.cwiseProduct(ops.d1c * sq);
    EXPECT_LE((m1 - as_eigen(FdSolver(g, {Nonlinearity::M1, 0.01}).apply_M(u))).cwiseAbs().maxCoeff(),
              1e-12 * m1.cwiseAbs().maxCoeff());
    EXPECT_LE((m2 - as_eigen(FdSolver(g, {Nonlinearity::M2, 0.01}).apply_M(u))).cwiseAbs().maxCoeff(),
              1e-12 * m2.cwiseAbs().maxCoeff());
}

TEST(FdSolver, M1RightHandSideHasZeroMean) {
    const auto g = make_grid(5, 128);
    FdSolver s(g, {Nonlinearity::M1, 0.01});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto m = s.apply_M(random_vector(128, seed));
        double sum = 0;
        for (double v : m) sum += v;
        EXPECT_LE(std::abs(sum) * g.dx(), 1e-12 * max_abs(m) * 128 * g.dx());
    }
}

TEST(FdSolver, ZeroFieldStepsInOneIteration) {
    const auto g = make_grid(40, 800);
    FdSolver s(g, {Nonlinearity::M2, 0.04});
    FieldState u{0.0, std::vector<double>(800, 0.0)};
    const auto info = s.step(u);
    EXPECT_TRUE(info.converged);
    EXPECT_EQ(info.fp_iters, 1);
    EXPECT_EQ(max_abs(u.values), 0.0);
    EXPECT_DOUBLE_EQ(u.time, 0.04);
}

TEST(FdSolver, M1StepPreservesMean) {
    const auto g = make_grid(10, 200);
    FdSchemeConfig cfg{Nonlinearity::M1, 0.01};
    FdSolver s(g, cfg);
    FieldState u = sample({SolutionFamily::DoublePole, 0, 1}, g, 0.0);
    for (double& v : u.values) v += 0.1;
    const double before = discrete_invariants(u, g).l1;
    for (int k = 0; k < 20; ++k) ASSERT_TRUE(s.step(u).converged);
    EXPECT_NEAR(discrete_invariants(u, g).l1, before, cfg.fp_tol * 200 * g.dx());
}

TEST(FdSolver, M2StepPreservesNorm) {
    const auto g = make_grid(10, 200);
    FdSchemeConfig cfg{Nonlinearity::M2, 0.01};
    FdSolver s(g, cfg);
    FieldState u = sample({SolutionFamily::Soliton, 0, 1.2}, g, 0.0);
    const double before = discrete_invariants(u, g).l2;
    const double norm = std::sqrt(before);
    ASSERT_TRUE(s.step(u).converged);
    EXPECT_NEAR(discrete_invariants(u, g).l2, before, 10 * cfg.fp_tol * norm);
}

TEST(FdSolver, LongRunConservation) {
    const auto g = make_grid(20, 400);
    for (auto nl : {Nonlinearity::M1, Nonlinearity::M2}) {
        const auto u0 = sample({SolutionFamily::Soliton, 0, 1}, g, 0.0);
        const auto r = run_fd({nl, 0.01}, g, u0, 100.0, 1000);
        ASSERT_EQ(r.status, RunStatus::Completed);
        ASSERT_EQ(r.steps_taken, 10000u);
        std::vector<InvariantTriple> inv;
        for (const auto& s : r.samples) inv.push_back(discrete_invariants(s.state, g));
        const auto d = drift_report(inv);
        if (nl == Nonlinearity::M1) {
            EXPECT_LE(d.max_abs_drift_l1, 1e-9);
        } else {
            EXPECT_LE(d.max_abs_drift_l2, 1e-9);
        }
    }
}

TEST(FdSolver, ReportsNonConvergence) {
    const auto g = make_grid(40, 800);
    FdSolver s(g, {Nonlinearity::M2, 0.04, 1e-12, 2});
    FieldState u = sample({SolutionFamily::DoublePole, 0, 1}, g, 0.0);
    const auto info = s.step(u);
    EXPECT_FALSE(info.converged);
    EXPECT_EQ(info.fp_iters, 2);
}

TEST(FdSolver, ConfigValidation) {
    const auto g = make_grid(5, 50);
    EXPECT_THROW(FdSolver(g, {Nonlinearity::M1, -1.0}), std::invalid_argument);
    EXPECT_THROW(FdSolver(g, {Nonlinearity::M1, 0.01, 0.0}), std::invalid_argument);
    EXPECT_THROW(FdSolver(g, {Nonlinearity::M1, 0.01, 1e-12, 0}), std::invalid_argument);
}

TEST(SemiDiscreteEnergy, ZeroField) {
    EXPECT_EQ(semi_discrete_l3_derivative(std::vector<double>(64, 0.0), make_grid(4, 64)), 0.0);
}

TEST(SemiDiscreteEnergy, VanishesForM1) {
    const auto g = make_grid(20, 256);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EXPECT_LE(std::abs(semi_discrete_l3_derivative(random_vector(256, seed), g)), 1e-10 * 256);
    }
}

TEST(SemiDiscreteEnergy, NonzeroForM2AlongFlow) {
    // An even profile makes the rate vanish by reflection; the M2 flow breaks that symmetry.
    const auto g = make_grid(40, 800);
    const auto u0 = sample({SolutionFamily::Soliton, 0, 1}, g, 0.0);
    const auto r = run_fd({Nonlinearity::M2, 0.01}, g, u0, 5.0, 100);
    ASSERT_EQ(r.status, RunStatus::Completed);
    double m2 = 0;
    for (const auto& s : r.samples) {
        m2 = std::max(m2, std::abs(semi_discrete_l3_derivative(s.state.values, g, Nonlinearity::M2)));
        EXPECT_LE(std::abs(semi_discrete_l3_derivative(s.state.values, g, Nonlinearity::M1)), 1e-10 * 800);
    }
    EXPECT_GT(m2, 1e-6);
}

TEST(GrowthFactor, ZeroPerturbationGivesUnitRatios) {
    const auto g = make_grid(40, 800);
    const auto u = sample({SolutionFamily::Soliton, 0, 1}, g, 0.0);
    const auto r = empirical_growth_factor({Nonlinearity::M2, 0.01}, g, u, 0.0, 10);
    ASSERT_EQ(r.ratios.size(), 10u);
    for (double v : r.ratios) EXPECT_EQ(v, 1.0);
}

TEST(GrowthFactor, WithinBoundOnSoliton) {
    const auto g = make_grid(40, 800);
    const auto u = sample({SolutionFamily::Soliton, 0, 1}, g, 0.0);
    for (auto nl : {Nonlinearity::M1, Nonlinearity::M2}) {
        const auto r = empirical_growth_factor({nl, 0.01}, g, u, 1e-8, 100, 5);
        EXPECT_FALSE(r.stability_warning);
        for (std::size_t k = 0; k < r.ratios.size(); ++k) EXPECT_LE(r.ratios[k], 1.05 * r.bounds[k]);
        EXPECT_NEAR(r.bounds.front(), c_stability_bound(1.0, 0.01), 1e-3);
    }
}

TEST(GrowthFactor, FlagsStabilityWindowViolation) {
    const auto g = make_grid(40, 800);
    const auto u = sample({SolutionFamily::Soliton, 0, 0.25}, g, 0.0);
    const auto r = empirical_growth_factor({Nonlinearity::M2, 12.0}, g, u, 1e-8, 3);
    EXPECT_TRUE(r.stability_warning);
    EXPECT_TRUE(std::isinf(r.bounds.front()));
    EXPECT_TRUE(std::isinf(c_stability_bound(1.0, 1.0)));
}
