#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tvckit/euler.hpp"

using namespace tvckit;

namespace {

StochasticPath quadlin_closed_form(int t_max) {
    return StochasticPath::scalar(TimeDomain::discrete(t_max), 2,
                                  [](double t, int w) { return oracle::quadlin_path(static_cast<int>(t), w); });
}

}  // namespace

TEST(BoundaryMode, ParseAndPrint) {
    EXPECT_EQ(BoundaryMode::parse("truncated"), BoundaryMode::truncated());
    EXPECT_EQ(BoundaryMode::parse("fixed:3"), BoundaryMode::fixed_initial(3));
    EXPECT_EQ(BoundaryMode::parse("fixed:3").to_string(), "fixed:3");
    EXPECT_EQ(BoundaryMode::truncated().to_string(), "truncated");
    EXPECT_THROW(BoundaryMode::parse("fixed:"), InputError);
    EXPECT_THROW(BoundaryMode::parse("fixed:-1"), InputError);
    EXPECT_THROW(BoundaryMode::parse("free"), InputError);
}

TEST(DiscreteEuler, ClosedFormIsStationary) {
    const auto V = quadlin_discrete(oracle::set_b());
    const SampleSpace space(oracle::kProbs);
    const auto rep = euler_report(V, space, quadlin_closed_form(30), BoundaryMode::truncated());
    EXPECT_TRUE(rep.stationary);
    EXPECT_LE(rep.max_abs, 1e-12);
    EXPECT_EQ(rep.times.front(), 0.0);
    EXPECT_EQ(rep.times.back(), 28.0);
    EXPECT_DOUBLE_EQ(rep.tolerance, 1e-8);
}

TEST(DiscreteEuler, RowsMatchHandWrittenFormula) {
    const auto V = quadlin_discrete(oracle::set_b());
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 3.0);
    const int t_max = 15;
    std::vector<std::vector<double>> y(2, std::vector<double>(t_max + 1));
    for (auto& row : y) {
        for (double& v : row) v = u(rng);
    }
    const auto path = StochasticPath::generate(TimeDomain::discrete(t_max), 2, 1, [&](int i, double, int w, int) {
        return y[static_cast<std::size_t>(w)][static_cast<std::size_t>(i)];
    });
    for (int t = 0; t <= t_max - 2; ++t) {
        for (int w = 0; w < 2; ++w) {
            EXPECT_NEAR(discrete_euler_residual_at(V, path, t, w),
                        oracle::quadlin_row(y[static_cast<std::size_t>(w)], t, t_max, w), 1e-13)
                << "t=" << t;
        }
    }
}

TEST(DiscreteEuler, BumpGivesSlopeTimesBump) {
    const auto V = quadlin_discrete(oracle::set_b());
    const auto base = quadlin_closed_form(20);
    const auto bumped = base.with_value(5, 0, 0, base(5, 0) + 0.1);
    const RandomScalar r = discrete_euler_residual(V, bumped, 5);
    EXPECT_NEAR(r[0], 0.2, 1e-12);
    EXPECT_NEAR(r[1], 0.0, 1e-12);
    const auto rep = euler_report(V, SampleSpace(oracle::kProbs), bumped);
    EXPECT_FALSE(rep.stationary);
    EXPECT_NEAR(rep.max_abs, 0.2, 1e-12);
}

TEST(DiscreteEuler, AdmissibleRange) {
    const auto V = quadlin_discrete(oracle::set_b());
    const auto y = quadlin_closed_form(10);
    EXPECT_THROW(discrete_euler_residual(V, y, 9), HorizonError);
    EXPECT_THROW(discrete_euler_residual(V, y, 1, BoundaryMode::fixed_initial(2)), HorizonError);
    EXPECT_NO_THROW(discrete_euler_residual(V, y, 2, BoundaryMode::fixed_initial(2)));
    const auto short_path = quadlin_closed_form(1);
    EXPECT_THROW(discrete_euler_residual(V, short_path, 0), HorizonError);
}

TEST(DiscreteEuler, HouseholdMatchesAnalyticRows) {
    const double d = 0.9;
    const auto V = household_log(d, 2);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> y(31);
        std::vector<double> c(29);
        y[0] = u(rng);
        y[1] = u(rng);
        for (std::size_t t = 0; t < 29; ++t) {
            c[t] = u(rng);
            y[t + 2] = y[t] + y[t + 1] - c[t];
        }
        const StochasticPath path(TimeDomain::discrete(30), 1, 1, y);
        for (int t = 0; t <= 28; ++t) {
            const double expect = oracle::household_row(c, t, d);
            EXPECT_NEAR(discrete_euler_residual_at(V, path, t, 0), expect, 1e-9 * std::max(1.0, std::abs(expect)))
                << "t=" << t;
        }
    }
}

TEST(DiscreteEuler, HouseholdConstantPath) {
    const auto V = household_log(0.9, 2);
    const auto ones = StochasticPath::scalar(TimeDomain::discrete(10), 1, [](double, int) { return 1.0; });
    EXPECT_NEAR(discrete_euler_residual_at(V, ones, 5, 0), 0.51759, 1e-12);
}

TEST(DiscreteEuler, DomainErrorWhenObjectiveIsNegInf) {
    const auto V = household_log(0.9, 2);
    const auto bad = StochasticPath::scalar(TimeDomain::discrete(10), 1, [](double t, int) { return t; });
    // c_t = t + (t+1) - (t+2) = t - 1 <= 0 at t = 1; V(1) = 0 anyway, but c_2 = 1 > 0.
    const auto worse = bad.with_value(4, 0, 0, 100.0);
    EXPECT_THROW(discrete_euler_residual(V, worse, 3), DomainError);
}

TEST(ContinuousEuler, ConstantAlphaIsStationary) {
    const auto v = quadlin_continuous(oracle::set_b());
    const auto x = StochasticPath::scalar(TimeDomain::continuous(5.0, 0.01), 2,
                                          [](double, int w) { return oracle::kAlpha[static_cast<std::size_t>(w)]; });
    const auto rep = euler_report(v, SampleSpace(oracle::kProbs), x);
    EXPECT_EQ(rep.mode, "continuous");
    EXPECT_LE(rep.max_abs, 1e-10);
    EXPECT_TRUE(rep.stationary);
    EXPECT_DOUBLE_EQ(rep.tolerance, 1e-4);
}

TEST(ContinuousEuler, MatchesAnalyticResidual) {
    // v = (x - a)^2 + b x' + c x'': residual 2(x - a) - b' + c'' = 2(x - a) with constant b, c.
    // For v = x'^2 the residual is -2 x''.
    const ContinuousObjective v(
        "xdot-squared", 1, 1, [](const Slots& s, double, int) { return s(1) * s(1); },
        [](const Slots& s, double, int, int slot, int) { return slot == 1 ? 2.0 * s(1) : 0.0; });
    const TimeDomain d = TimeDomain::continuous(3.0, 0.001);
    const auto x = StochasticPath::scalar(d, 1, [](double t, int) { return std::sin(t); });
    for (double t : {0.5, 1.0, 2.0, 2.9}) {
        EXPECT_NEAR(continuous_euler_residual(v, x, t)[0], 2.0 * std::sin(t), 1e-5) << t;
    }
    EXPECT_THROW(continuous_euler_residual(v, x, 0.0), HorizonError);
}

TEST(ContinuousTerms, SeriesDerivatives) {
    const auto v = quadlin_continuous(oracle::set_b());
    const TimeDomain d = TimeDomain::continuous(2.0, 0.001);
    const auto x = StochasticPath::scalar(d, 2, [](double t, int) { return t * t; });
    const ContinuousTerms terms(v, x);
    const int i = d.index_of(1.0);
    // s_0 = v_1 = 2(x - a) = 2(t^2 - 1); D s_0 = 4t.
    EXPECT_NEAR(terms.slot_derivative(0, 0)(i, 0), 0.0, 1e-12);
    EXPECT_NEAR(terms.slot_derivative(1, 1)(i, 0), 0.0, 1e-9);
    EXPECT_NEAR(terms.jet(1)(i, 0), 2.0, 1e-9);
    EXPECT_NEAR(terms.euler_at(i, 0), 0.0, 1e-9);
}
