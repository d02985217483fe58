#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tvckit/correspondence.hpp"

using namespace tvckit;

namespace {

std::vector<CorrespondenceSample> samples(std::uint64_t seed, int count = 100) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<CorrespondenceSample> out;
    for (int i = 0; i < count; ++i) {
        CorrespondenceSample s;
        for (double& y : s.y) y = u(rng);
        s.t = static_cast<int>(rng() % 20);
        s.omega = static_cast<int>(rng() % 2);
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST(Correspondence, InducedValueIsComposition) {
    const auto V = quadlin_discrete(oracle::set_b());
    const auto pair = discrete_to_continuous(V);
    const Slots jet(2, 1, {1.2, 0.3, -0.1});
    // V(x, x + y, x + 2y + z) by hand.
    const double x = 1.2, y = 0.3, z = -0.1;
    const double expect = (x - 2.0) * (x - 2.0) + 0.4 * (x + y) + 0.2 * (x + 2 * y + z);
    EXPECT_NEAR(pair.v.eval(jet, 3.0, 1), expect, 1e-15);
}

TEST(Correspondence, QuadLinIdentities) {
    const auto pair = discrete_to_continuous(quadlin_discrete(oracle::set_b()));
    const auto rep = correspondence_check(pair, samples(1));
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.partial_gap, 1e-10);
    EXPECT_LE(rep.euler_gap, 1e-10);
    EXPECT_LE(rep.fd_gap, 1e-6);
    EXPECT_EQ(rep.checked, 100);
    EXPECT_DOUBLE_EQ(rep.tolerance, 1e-10);
}

TEST(Correspondence, SymbolicRouteAgreesWithChainRule) {
    const DslModel m("ln(1 + y0*y0) + y1*y2 - 0.5*y2^2", 2, {});
    const auto sym = discrete_to_continuous(m);
    const auto chain = discrete_to_continuous(m.discrete());
    EXPECT_TRUE(sym.symbolic);
    EXPECT_FALSE(chain.symbolic);
    for (const auto& s : samples(2, 30)) {
        const Slots jet(2, 1, {s.y[0], s.y[1] - s.y[0], s.y[2] - 2 * s.y[1] + s.y[0]});
        EXPECT_NEAR(sym.v.eval(jet, s.t, 0), chain.v.eval(jet, s.t, 0), 1e-12);
        for (int k = 0; k < 3; ++k) {
            EXPECT_NEAR(sym.v.analytic_partial(jet, s.t, 0, k, 0), chain.v.analytic_partial(jet, s.t, 0, k, 0),
                        1e-10);
        }
    }
    EXPECT_TRUE(correspondence_check(sym, samples(3)).pass);
}

TEST(Correspondence, HouseholdSkipsDomainBoundary) {
    const auto pair = discrete_to_continuous(household_log(0.9, 2));
    const auto rep = correspondence_check(pair, samples(4));
    EXPECT_GT(rep.checked, 0);
    EXPECT_GT(rep.skipped, 0);
    EXPECT_TRUE(rep.pass);
}

TEST(Correspondence, DetectsBrokenPartials) {
    const auto V = quadlin_discrete(oracle::set_b());
    auto pair = discrete_to_continuous(V);
    pair.v = pair.v.with_partials([](const Slots&, double, int, int slot, int) { return slot == 0 ? 1.0 : 0.0; });
    EXPECT_FALSE(correspondence_check(pair, samples(5)).pass);
}

TEST(Correspondence, OrderTwoOnly) {
    EXPECT_THROW(discrete_to_continuous(household_log(0.9, 3)), UnsupportedError);
}
