// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tvckit/cli.hpp"
#include "tvckit/correspondence.hpp"
#include "tvckit/curves.hpp"
#include "tvckit/diagnostics.hpp"
#include "tvckit/euler.hpp"
#include "tvckit/solver.hpp"
#include "tvckit/tvc.hpp"

using namespace tvckit;

namespace {

const std::filesystem::path kDir = TVCKIT_SCENARIO_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

StochasticPath quadlin_closed_form(int t_max) {
    return StochasticPath::scalar(TimeDomain::discrete(t_max), 2,
                                  [](double t, int w) { return oracle::quadlin_path(static_cast<int>(t), w); });
}

Json run_json(const std::string& command, const std::string& file, int& code) {
    RunOptions o;
    o.command = command;
    o.scenario = kDir / file;
    o.quiet = true;
    std::ostringstream out;
    std::ostringstream err;
    code = run(o, out, err);
    return Json::parse(out.str());
}

Outcome ac1() {
    const SampleSpace space(oracle::kProbs);
    const auto V = quadlin_discrete(oracle::set_b());
    SolveSpec spec;
    spec.horizon = 20;
    const auto res = newton_euler_solve(V, spec, space);
    double err = 0.0;
    for (int t = 0; t <= 20; ++t) {
        for (int w = 0; w < 2; ++w) {
            err = std::max(err, std::abs(res.path(t, w) - oracle::quadlin_path(t, w)));
        }
    }
    // Residuals of the solved path through the hand-written row formula.
    double resid = 0.0;
    const int t_max = res.path.domain().t_max();
    for (int w = 0; w < 2; ++w) {
        std::vector<double> y;
        for (int t = 0; t <= t_max; ++t) y.push_back(res.path(t, w));
        for (int t = 0; t <= 20; ++t) resid = std::max(resid, std::abs(oracle::quadlin_row(y, t, t_max, w)));
    }
    int code = 0;
    const Json rep = run_json("solve", "quadlin-solve.json", code);
    return {err <= 1e-8 && resid <= 1e-10 && code == kExitPass,
            "max path error " + fmt(err) + ", max residual " + fmt(resid) + ", solve exit " + std::to_string(code)};
}

Outcome ac2() {
    // Oracle: every surviving tail term is beta q + gamma q at the next slot or gamma q two ahead.
    double oracle_tail = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        oracle_tail += oracle::kProbs[i] * (oracle::kBeta[i] + 2.0 * oracle::kGamma[i]);
    }
    const auto V = quadlin_discrete(oracle::set_b());
    const auto y = quadlin_closed_form(50);
    const auto q = step_curve(y.domain(), {1.0, 1.0}, 1);
    double worst = 0.0;
    for (int tp = 2; tp <= 48; ++tp) {
        worst = std::max(worst, std::abs(discrete_tvc_tail(V, SampleSpace(oracle::kProbs), y, q, tp) - oracle_tail));
    }
    int code = 0;
    const Json rep = run_json("tvc", "quadlin-counterexample.json", code);
    const double liminf = rep["results"]["liminf_estimate"].get<double>();
    const std::string verdict = rep["verdicts"][0]["verdict"].get<std::string>();
    const bool ok = std::abs(oracle_tail - 0.9) <= 1e-15 && worst <= 1e-10 && std::abs(liminf - 0.9) <= 1e-10 &&
                    verdict == "VIOLATED" && code == kExitVerdictFailed;
    return {ok, "max |tail - 0.9| " + fmt(worst) + ", liminf " + fmt(liminf) + ", " + verdict + ", exit " +
                    std::to_string(code)};
}

Outcome ac3() {
    const TimeDomain d = TimeDomain::continuous(20.0, 1e-3);
    const SampleSpace space(oracle::kProbs);
    const auto v = quadlin_continuous(oracle::set_b());
    const auto x = StochasticPath::scalar(d, 2, [](double, int w) { return oracle::kAlpha[static_cast<std::size_t>(w)]; });
    const auto p = ramp_curve(d, {1.0, 1.0}, {1.0, 2});
    const auto euler = euler_report(v, space, x);
    const double eb = oracle::weighted(oracle::kProbs, oracle::kBeta);
    const auto rep = tvc_liminf_continuous(v, space, x, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        if (rep.times[i] >= 2.0) worst = std::max(worst, std::abs(rep.values[i] - eb));
    }
    int code = 0;
    const Json cli = run_json("tvc", "continuous-counterexample.json", code);
    const std::string verdict = cli["verdicts"][0]["verdict"].get<std::string>();
    const bool ok = euler.max_abs <= 1e-6 && worst <= 1e-4 && !rep.satisfied && verdict == "VIOLATED" &&
                    code == kExitVerdictFailed;
    return {ok, "max interior residual " + fmt(euler.max_abs) + ", max |bracket - " + fmt(eb) + "| " + fmt(worst) +
                    ", " + verdict};
}

Outcome ac4() {
    const auto V = quadlin_discrete(oracle::set_b());
    const SampleSpace space(oracle::kProbs);
    const auto y = quadlin_closed_form(50);
    const auto eps = geometric_grid(1e-1, 1e-6, 6);
    const auto step = step_curve(y.domain(), {1.0, 1.0}, 1);
    const auto m = a_grid(V, space, y, step, eps, geometric_horizons(3, 48, 8));
    const auto a = uniformity_verdict(m);
    double slope_err = 0.0;
    for (std::size_t c = 0; c < eps.size(); ++c) {
        slope_err = std::max(slope_err, std::abs(a.limits.growth[c].slope - eps[c]) / eps[c]);
    }
    const auto win = window_curve(y.domain(), {1.0, 1.0}, 1, 10);
    const auto b = uniformity_verdict(a_grid(V, space, y, win, eps, geometric_horizons(13, 48, 8)));
    const bool ok = a.verdict == Uniformity::non_uniform && slope_err <= 0.05 && b.verdict == Uniformity::uniform &&
                    b.limit_gap <= 1e-6;
    return {ok, "eventually-constant " + to_string(a.verdict) + " (slope rel err " + fmt(slope_err) +
                    "), compact " + to_string(b.verdict) + " (gap " + fmt(b.limit_gap) + ")"};
}

Outcome ac5() {
    const double disc = 0.9;
    const auto V = household_log(disc, 2);
    std::mt19937_64 rng(2024);
    // y in [1, 1.9] keeps every c_t = y_t + y_{t+1} - y_{t+2} >= 0.1.
    std::uniform_real_distribution<double> u(1.0, 1.9);
    const int T = 30;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> yv(T + 1);
        for (double& v : yv) v = u(rng);
        std::vector<double> c(T - 1);
        for (std::size_t t = 0; t + 2 < yv.size(); ++t) c[t] = yv[t] + yv[t + 1] - yv[t + 2];
        const StochasticPath y(TimeDomain::discrete(T), 1, 1, yv);
        for (int t = 4; t <= T - 2; ++t) {
            const auto i = static_cast<std::size_t>(t);
            const double expect =
                std::pow(disc, t - 2) * (-1.0 / c[i - 2] + disc / c[i - 1] + disc * disc / c[i]);
            const double got = discrete_euler_residual_at(V, y, t, 0);
            worst = std::max(worst, std::abs(got - expect) / std::max(std::abs(expect), 1e-300));
        }
    }
    return {worst <= 1e-9, "max relative gap " + fmt(worst)};
}

Outcome ac6() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> tdist(2, 12);
    const SampleSpace space(oracle::kProbs);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double a = u(rng), b = u(rng), c = u(rng), e = u(rng);
        const DslModel m("a*(y0 - 1)^2 + b*y0*y1 + c*y2^2 + e*y1*y2 + y0", 2,
                         {{"a", {a, a + 0.5}}, {"b", {b, -b}}, {"c", {c, c}}, {"e", {e, 0.1}}});
        const auto V = m.discrete();
        const int tp = tdist(rng);
        const TimeDomain d = TimeDomain::discrete(tp + 2);
        std::vector<double> yv(static_cast<std::size_t>(2 * (tp + 3)));
        std::vector<double> qv(yv.size());
        for (double& y : yv) y = u(rng);
        for (double& q : qv) q = u(rng);
        const StochasticPath y(d, 2, 1, yv);
        const PerturbationCurve q(StochasticPath(d, 2, 1, qv));
        const auto chk = variation_decomposition_check(V, space, y, q, tp);
        const double h = 1e-6;
        const double direct = (oracle::truncated_sum(V, oracle::kProbs, y, q.path(), h, tp) -
                               oracle::truncated_sum(V, oracle::kProbs, y, q.path(), -h, tp)) /
                              (2 * h);
        worst = std::max(worst, std::abs(direct - (chk.boundary + chk.interior + chk.tail)));
    }
    return {worst <= 1e-6, "max |direct - decomposition| " + fmt(worst) + " over 50 triples"};
}

Outcome ac7() {
    const auto V = quadlin_discrete(oracle::set_b());
    const auto pair = discrete_to_continuous(V);
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(-2.0, 3.0);
    std::vector<CorrespondenceSample> samples;
    double partial_gap = 0.0;
    for (int i = 0; i < 100; ++i) {
        CorrespondenceSample s;
        for (double& y : s.y) y = u(rng);
        s.t = static_cast<int>(rng() % 20);
        s.omega = static_cast<int>(rng() % 2);
        samples.push_back(s);
        // Hand check of v1 = V1 + V2 + V3, v2 = V2 + 2 V3, v3 = V3 against V's own partials.
        const Slots win(2, 1, {s.y[0], s.y[1], s.y[2]});
        const Slots jet(2, 1, {s.y[0], s.y[1] - s.y[0], s.y[2] - 2 * s.y[1] + s.y[0]});
        double Vp[3];
        for (int k = 0; k < 3; ++k) Vp[k] = V.analytic_partial(win, s.t, s.omega, k, 0);
        const double want[3] = {Vp[0] + Vp[1] + Vp[2], Vp[1] + 2 * Vp[2], Vp[2]};
        for (int k = 0; k < 3; ++k) {
            partial_gap = std::max(partial_gap, std::abs(pair.v.analytic_partial(jet, s.t, s.omega, k, 0) - want[k]));
        }
    }
    const auto rep = correspondence_check(pair, samples);
    const bool ok = partial_gap <= 1e-10 && rep.partial_gap <= 1e-10 && rep.euler_gap <= 1e-10 && rep.checked == 100;
    return {ok, "partial gap " + fmt(std::max(partial_gap, rep.partial_gap)) + ", Euler-form gap " +
                    fmt(rep.euler_gap)};
}

Outcome ac8() {
    const auto V = household_log(0.9, 2);
    const SampleSpace space(oracle::kProbs);
    SolveSpec spec;
    spec.horizon = 6;
    spec.mode = BoundaryMode::fixed_initial(4);
    spec.head = {{1, 1, 1, 1}, {1, 1, 1, 1}};
    spec.tail = {{0.2, 0.1}, {0.2, 0.1}};
    spec.tolerance = 1e-12;
    const auto newton = newton_euler_solve(V, spec, space);
    std::vector<double> grid;
    const double cell = 0.05;
    for (int i = 0; i <= 20; ++i) grid.push_back(1.0 + cell * i);
    const BruteForceSpec bf{newton.path, {4, 5, 6}, {grid, grid, grid}, 6};
    const auto brute = brute_force_solve(V, space, bf);
    double dist = 0.0;
    for (int t = 4; t <= 6; ++t) {
        for (int w = 0; w < 2; ++w) dist = std::max(dist, std::abs(brute.path(t, w) - newton.path(t, w)));
    }
    const double nv = truncated_value(V, space, newton.path, 6);
    const bool ok = dist <= cell && brute.value <= nv + 1e-9 * std::max(1.0, std::abs(nv));
    return {ok, "max distance " + fmt(dist) + " (cell " + fmt(cell) + "), brute " + fmt(brute.value) + " vs newton " +
                    fmt(nv)};
}

template <typename Time>
double check_gradient(const ReducedObjective<Time>& obj, std::mt19937_64& rng, int states, bool household,
                      const std::function<Time(std::mt19937_64&)>& time) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<PointSample<Time>> pts;
    const int n = obj.order();
    while (pts.size() < 100) {
        std::vector<double> s(static_cast<std::size_t>(n + 1));
        for (double& v : s) v = u(rng);
        if (household) {
            // Keep c = y0 + .. + y_{n-1} - y_n strictly positive.
            double head = 0.0;
            for (int k = 0; k < n; ++k) head += s[static_cast<std::size_t>(k)];
            s[static_cast<std::size_t>(n)] = head - u(rng);
        }
        pts.push_back({Slots(n, 1, s), time(rng), static_cast<int>(rng() % static_cast<unsigned>(states))});
    }
    const auto rep = gradient_check(obj, pts, 1e-6);
    return (rep.checked == 100) ? rep.max_gap : INFINITY;
}

Outcome ac9() {
    std::mt19937_64 rng(4242);
    const auto int_time = [](std::mt19937_64& r) { return static_cast<int>(2 + r() % 20); };
    const auto real_time = [](std::mt19937_64& r) { return std::uniform_real_distribution<double>(0.0, 20.0)(r); };
    double worst = 0.0;
    std::string detail;
    const auto note = [&](const std::string& name, double gap) {
        worst = std::max(worst, gap);
        detail += name + " " + fmt(gap) + "; ";
    };
    note("quadlin-discrete", check_gradient<int>(quadlin_discrete(oracle::set_b()), rng, 2, false, int_time));
    note("quadlin-continuous", check_gradient<double>(quadlin_continuous(oracle::set_b()), rng, 2, false, real_time));
    note("household-log", check_gradient<int>(household_log(0.9, 2), rng, 2, true, int_time));
    for (const char* f : {"dsl-quadratic.json", "dsl-log.json"}) {
        const Scenario s = load_scenario(kDir / f);
        const auto m = build_dsl(s);
        const bool positive_arg = std::string(f) == "dsl-log.json";
        note(f, check_gradient<int>(m->discrete(), rng, s.omega.states(), positive_arg, int_time));
    }
    return {worst <= 1e-6, detail + "max " + fmt(worst)};
}

Outcome ac10() {
    std::vector<std::string> presets = demo_presets();
    presets.push_back("all");
    for (const auto& p : presets) {
        const std::string a = demo_report(p, 12345).dump(2);
        const std::string b = demo_report(p, 12345).dump(2);
        if (a != b) return {false, "preset " + p + " differs between runs"};
    }
    return {true, std::to_string(presets.size()) + " presets byte-identical across two runs"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 discrete closed-form solve", ac1},
        {"AC2 discrete transversality counterexample", ac2},
        {"AC3 continuous pipeline", ac3},
        {"AC4 assumption diagnostics", ac4},
        {"AC5 household Euler identity", ac5},
        {"AC6 variation decomposition", ac6},
        {"AC7 discrete/continuous correspondence", ac7},
        {"AC8 brute-force oracle", ac8},
        {"AC9 gradient checks", ac9},
        {"AC10 determinism", ac10},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const auto cut = name.find(' ');
        std::printf("%s %s %s: %s\n", name.substr(0, cut).c_str(), o.pass ? "PASS" : "FAIL",
                    name.substr(cut + 1).c_str(), o.detail.c_str());
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
