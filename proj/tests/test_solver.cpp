#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tvckit/solver.hpp"

using namespace tvckit;

namespace {

SolveSpec household_spec(int horizon) {
    SolveSpec spec;
    spec.horizon = horizon;
    spec.mode = BoundaryMode::fixed_initial(4);
    spec.head = {{1, 1, 1, 1}, {1, 1, 1, 1}};
    spec.tail = {{0.2, 0.1}, {0.2, 0.1}};
    spec.tolerance = 1e-12;
    return spec;
}

}  // namespace

TEST(Newton, QuadLinTruncatedClosedForm) {
    const auto V = quadlin_discrete(oracle::set_b());
    SolveSpec spec;
    spec.horizon = 20;
    const auto res = newton_euler_solve(V, spec, SampleSpace(oracle::kProbs));
    for (int t = 0; t <= 20; ++t) {
        for (int w = 0; w < 2; ++w) {
            EXPECT_NEAR(res.path(t, w), oracle::quadlin_path(t, w), 1e-8) << t << "," << w;
        }
    }
    EXPECT_LE(res.max_residual, 1e-10);
    // Convex in every y_t: the stationary point is a minimum of the truncated sum.
    EXPECT_EQ(res.stationarity, (std::vector<std::string>{"min", "min"}));
}

TEST(Newton, HouseholdFixedBoundary) {
    const auto V = household_log(0.9, 2);
    const SampleSpace space(oracle::kProbs);
    const auto res = newton_euler_solve(V, household_spec(10), space);
    EXPECT_LE(res.max_residual, 1e-10);
    EXPECT_EQ(res.stationarity, (std::vector<std::string>{"max", "max"}));
    EXPECT_EQ(res.path(0, 0), 1.0);
    EXPECT_EQ(res.path(11, 1), 0.2);
    EXPECT_EQ(res.path(12, 1), 0.1);
    // Independent check of stationarity: every row through the oracle formula.
    std::vector<double> c;
    for (int t = 0; t + 2 <= 12; ++t) {
        c.push_back(res.path(t, 0) + res.path(t + 1, 0) - res.path(t + 2, 0));
    }
    for (int t = 4; t <= 10; ++t) {
        EXPECT_NEAR(oracle::household_row(c, t, 0.9), 0.0, 1e-10) << t;
    }
}

TEST(Newton, GuessOutsideDomainIsInputError) {
    const auto V = household_log(0.9, 2);
    auto spec = household_spec(6);
    spec.guess = StochasticPath::scalar(TimeDomain::discrete(8), 2, [](double t, int) { return t < 4 ? 1.0 : 50.0; });
    EXPECT_THROW(newton_euler_solve(V, spec, SampleSpace(oracle::kProbs)), InputError);
}

TEST(Newton, IterationCapIsNumericalError) {
    const auto V = household_log(0.9, 2);
    auto spec = household_spec(10);
    spec.max_iterations = 1;
    EXPECT_THROW(newton_euler_solve(V, spec, SampleSpace(oracle::kProbs)), NumericalError);
}

TEST(Newton, SingularJacobian) {
    // V depends on y_{t+1} only linearly: every Euler row is constant in the unknowns.
    const DiscreteObjective V("linear", 1, 1, [](const Slots& s, int, int) { return s(0) + s(1); });
    SolveSpec spec;
    spec.horizon = 5;
    EXPECT_THROW(newton_euler_solve(V, spec, SampleSpace({1.0})), NumericalError);
}

TEST(BruteForce, AgreesWithNewtonOnHousehold) {
    const auto V = household_log(0.9, 2);
    const SampleSpace space(oracle::kProbs);
    const auto spec = household_spec(6);
    const auto res = newton_euler_solve(V, spec, space);
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(1.0 + 0.05 * i);
    BruteForceSpec bf{res.path, {4, 5, 6}, {grid, grid, grid}, 6};
    const auto out = brute_force_solve(V, space, bf);
    EXPECT_EQ(out.evaluated, 2 * 21 * 21 * 21);
    EXPECT_LT(out.skipped, out.evaluated);
    for (int t = 4; t <= 6; ++t) {
        EXPECT_LE(std::abs(out.path(t, 0) - res.path(t, 0)), 0.05) << t;
    }
    EXPECT_LE(out.value, truncated_value(V, space, res.path, 6) + 1e-9);
    // Newton optimum from the scipy cross-check.
    EXPECT_NEAR(res.path(4, 0), 1.3712, 1e-3);
    EXPECT_NEAR(res.path(5, 0), 1.4010, 1e-3);
    EXPECT_NEAR(res.path(6, 0), 1.5499, 1e-3);
}

TEST(BruteForce, Limits) {
    const auto V = quadlin_discrete(oracle::set_b());
    const auto y = StochasticPath(TimeDomain::discrete(12), 2, 1);
    std::vector<double> g{0.0, 1.0};
    BruteForceSpec too_many{y, {0, 1, 2, 3, 4, 5, 6}, std::vector<std::vector<double>>(7, g), 10};
    EXPECT_THROW(brute_force_solve(V, SampleSpace(oracle::kProbs), too_many), InputError);
    std::vector<double> big(30, 0.0);
    BruteForceSpec too_big{y, {0, 1, 2, 3, 4}, std::vector<std::vector<double>>(5, big), 10};
    EXPECT_THROW(brute_force_solve(V, SampleSpace(oracle::kProbs), too_big), InputError);
}

TEST(TruncatedValue, NegInfPropagates) {
    const auto V = household_log(0.9, 2);
    const auto y = StochasticPath::scalar(TimeDomain::discrete(6), 1, [](double t, int) { return t == 4 ? 9.0 : 1.0; });
    EXPECT_EQ(truncated_value(V, SampleSpace({1.0}), y, 4), kNegInf);
}
