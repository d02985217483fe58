#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tvckit/curves.hpp"
#include "tvckit/diagnostics.hpp"

using namespace tvckit;

namespace {

StochasticPath quadlin_closed_form(int t_max) {
    return StochasticPath::scalar(TimeDomain::discrete(t_max), 2,
                                  [](double t, int w) { return oracle::quadlin_path(static_cast<int>(t), w); });
}

struct Fixture {
    DiscreteObjective V = quadlin_discrete(oracle::set_b());
    SampleSpace space{oracle::kProbs};
    StochasticPath y = quadlin_closed_form(50);
    std::vector<double> eps = geometric_grid(1e-1, 1e-6, 6);
    std::vector<double> tprime = geometric_horizons(3, 48, 8);
};

// A(T', eps) for the eventually-constant q written out: sum_t eps E q(t)^2 plus
// the surviving beta/gamma terms, eps T' + E[(beta + gamma) q + gamma q] = eps T' + 0.9.
double a_closed_form(double eps, double tprime) { return eps * tprime + 0.9; }

}  // namespace

TEST(Grids, GeometricGridIsExactAtDecades) {
    const auto g = geometric_grid(1e-1, 1e-6, 6);
    ASSERT_EQ(g.size(), 6u);
    EXPECT_EQ(g[0], 0.1);
    EXPECT_NEAR(g[2], 1e-3, 1e-18);
    EXPECT_EQ(g[5], 1e-6);
    const auto h = geometric_horizons(3, 48, 8);
    EXPECT_EQ(h.front(), 3.0);
    EXPECT_EQ(h.back(), 48.0);
    for (std::size_t i = 1; i < h.size(); ++i) {
        EXPECT_GT(h[i], h[i - 1]);
        EXPECT_EQ(h[i], std::floor(h[i]));
    }
}

TEST(AGrid, EventuallyConstantMatchesClosedForm) {
    Fixture f;
    const auto q = step_curve(f.y.domain(), {1.0, 1.0}, 1);
    const auto m = a_grid(f.V, f.space, f.y, q, f.eps, f.tprime);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            const auto ri = static_cast<std::size_t>(r);
            const auto ci = static_cast<std::size_t>(c);
            EXPECT_NEAR(m.values[ri][ci], a_closed_form(m.eps_grid[ci], m.tprime_grid[ri]), 1e-7);
        }
    }
}

TEST(AGrid, RejectsBadGrids) {
    Fixture f;
    const auto q = step_curve(f.y.domain(), {1.0, 1.0}, 1);
    EXPECT_THROW(a_grid(f.V, f.space, f.y, q, {1e-3, 1e-2}, f.tprime), InputError);
    EXPECT_THROW(a_grid(f.V, f.space, f.y, q, f.eps, {5.0, 3.0}), InputError);
}

TEST(AGrid, FlagsNegInfCells) {
    const auto V = household_log(0.9, 2);
    const auto y = StochasticPath::scalar(TimeDomain::discrete(20), 1, [](double, int) { return 1.0; });
    const auto q = step_curve(y.domain(), {1.0}, 5);
    // eps = 2 pushes c_3 = 1 + 1 - 3 below zero; eps = 0.1 keeps c positive.
    const auto m = a_grid(V, SampleSpace({1.0}), y, q, {2.0, 0.1}, {6.0, 10.0});
    EXPECT_EQ(m.status[0][0], CellStatus::domain_error);
    EXPECT_TRUE(std::isnan(m.values[0][0]));
    EXPECT_EQ(m.status[0][1], CellStatus::finite);
    EXPECT_GT(m.flagged(), 0);
    const auto csv = matrix_csv(m);
    EXPECT_NE(csv.find("nan"), std::string::npos);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "tprime,2,0.1");
}

TEST(Uniformity, EventuallyConstantIsNonUniform) {
    Fixture f;
    const auto q = step_curve(f.y.domain(), {1.0, 1.0}, 1);
    const auto m = a_grid(f.V, f.space, f.y, q, f.eps, f.tprime);
    const auto u = uniformity_verdict(m);
    EXPECT_EQ(u.verdict, Uniformity::non_uniform);
    for (std::size_t c = 0; c < m.eps_grid.size(); ++c) {
        EXPECT_NEAR(u.limits.growth[c].slope, m.eps_grid[c], 0.05 * m.eps_grid[c]);
        EXPECT_TRUE(u.limits.along_T[c].diverges);
    }
    // The inner T' limit diverges for every eps; the inner eps limit is 0.9 at every T'.
    EXPECT_TRUE(u.limits.eps_then_T.diverges);
    EXPECT_FALSE(u.limits.T_then_eps.diverges);
    EXPECT_NEAR(u.limits.T_then_eps.value, 0.9, 1e-6);
}

TEST(Uniformity, CompactSupportIsUniform) {
    Fixture f;
    const auto q = window_curve(f.y.domain(), {1.0, 1.0}, 1, 10);
    const auto m = a_grid(f.V, f.space, f.y, q, f.eps, geometric_horizons(13, 48, 8));
    const auto u = uniformity_verdict(m);
    EXPECT_EQ(u.verdict, Uniformity::uniform) << u.reason;
    EXPECT_LE(u.limit_gap, 1e-6);
}

TEST(Uniformity, TooFewPointsIsInconclusive) {
    Fixture f;
    const auto q = step_curve(f.y.domain(), {1.0, 1.0}, 1);
    const auto m = a_grid(f.V, f.space, f.y, q, {1e-1, 1e-2, 1e-3}, f.tprime);
    EXPECT_EQ(uniformity_verdict(m).verdict, Uniformity::inconclusive);
}

TEST(Uniformity, ScalingCurveMatchesScalingEps) {
    Fixture f;
    for (int onset : {1, 0}) {
        const auto q = onset ? step_curve(f.y.domain(), {1.0, 1.0}, 1) : window_curve(f.y.domain(), {1.0, 1.0}, 1, 10);
        const double c = 3.0;
        std::vector<double> eps_c = f.eps;
        for (double& e : eps_c) e *= c;
        const auto lhs = uniformity_verdict(a_grid(f.V, f.space, f.y, q.scaled(c), f.eps, f.tprime));
        const auto rhs = uniformity_verdict(a_grid(f.V, f.space, f.y, q, eps_c, f.tprime));
        EXPECT_EQ(lhs.verdict, rhs.verdict);
    }
}

TEST(FitGrowth, LinearAndFlat) {
    const std::vector<double> x{1, 2, 4, 8, 16, 32};
    std::vector<double> lin;
    std::vector<double> flat;
    for (double v : x) {
        lin.push_back(0.3 * v + 1.0);
        flat.push_back(2.0);
    }
    const auto g = fit_growth(x, lin);
    EXPECT_NEAR(g.slope, 0.3, 1e-12);
    EXPECT_TRUE(g.growth);
    EXPECT_FALSE(fit_growth(x, flat).growth);
    const auto lim = limit_along(x, flat);
    EXPECT_FALSE(lim.diverges);
    EXPECT_DOUBLE_EQ(lim.value, 2.0);
    EXPECT_TRUE(limit_along(x, lin).diverges);
}

TEST(LimitEpsZero, RichardsonOnLinearModel) {
    const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    std::vector<double> y;
    for (double e : eps) y.push_back(0.9 + 5.0 * e);
    const auto lim = limit_eps_zero(eps, y);
    EXPECT_NEAR(lim.value, 0.9, 1e-12);
    EXPECT_LE(lim.error, 1e-10);
}

TEST(Domination, BoundedForQuadLin) {
    Fixture f;
    const auto q = step_curve(f.y.domain(), {1.0, 1.0}, 1);
    const auto rep = domination_check(f.V, f.y, q, 0.1, {0, 1, 2, 5, 10});
    EXPECT_TRUE(rep.bounded);
    EXPECT_EQ(rep.eps_grid.size(), 12u);
    EXPECT_DOUBLE_EQ(rep.eps_grid[1], 0.05);
    // m_t = 2(y - a) q + eps q^2 + b q(t+1) + c q(t+2); at t = 5 in state 0: -0.75 + eps + 0.75.
    for (const auto& cell : rep.cells) {
        if (cell.t == 5.0 && cell.omega == 0) {
            EXPECT_NEAR(cell.sup, 0.1, 1e-9);
        }
    }
}

TEST(Domination, DetectsGrowth) {
    // V = sqrt|y0 - 1| has an unbounded difference quotient at y0 = 1.
    const DiscreteObjective V(
        "kink", 0, 1, [](const Slots& s, int, int) { return std::sqrt(std::abs(s(0) - 1.0)); });
    const auto y = StochasticPath::scalar(TimeDomain::discrete(5), 1, [](double, int) { return 1.0; });
    const auto q = step_curve(y.domain(), {1.0}, 0);
    const auto rep = domination_check(V, y, q, 0.1, {2});
    EXPECT_FALSE(rep.bounded);
    EXPECT_TRUE(rep.cells.front().growth);
}
