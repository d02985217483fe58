#include <algorithm>
#include <cmath>
#include <random>

#include "tvckit/cli.hpp"
#include "tvckit/correspondence.hpp"
#include "tvckit/diagnostics.hpp"
#include "tvckit/tvc.hpp"

namespace tvckit {

namespace {

// Set-B constants: two equally likely states.
constexpr const char* kQuadlinCounter = R"json({
  "name": "quadlin-counterexample",
  "time": {"kind": "discrete", "t_max": 50},
  "omega": {"probs": [0.5, 0.5]},
  "objective": {"builtin": "quadlin-discrete",
                "params": {"alpha": [1, 2], "beta": [0.5, 0.4], "gamma": [0.25, 0.2]}},
  "path": {"kind": "closed-form", "name": "quadlin-discrete-euler"},
  "perturbation": {"kind": "eventually-constant", "value": [1, 1], "onset": 1},
  "boundary": "truncated"
})json";

constexpr const char* kQuadlinCompact = R"json({
  "name": "quadlin-compact",
  "time": {"kind": "discrete", "t_max": 50},
  "omega": {"probs": [0.5, 0.5]},
  "objective": {"builtin": "quadlin-discrete",
                "params": {"alpha": [1, 2], "beta": [0.5, 0.4], "gamma": [0.25, 0.2]}},
  "path": {"kind": "closed-form", "name": "quadlin-discrete-euler"},
  "perturbation": {"kind": "compact-support", "value": [1, 1], "start": 1, "last": 10},
  "boundary": "truncated"
})json";

constexpr const char* kQuadlinSolve = R"json({
  "name": "quadlin-solve",
  "time": {"kind": "discrete", "t_max": 22},
  "omega": {"probs": [0.5, 0.5]},
  "objective": {"builtin": "quadlin-discrete",
                "params": {"alpha": [1, 2], "beta": [0.5, 0.4], "gamma": [0.25, 0.2]}},
  "path": {"kind": "solve"},
  "solve": {"boundary": "truncated", "tolerance": 1e-12},
  "tolerances": {"euler": 1e-10}
})json";

constexpr const char* kContinuousCounter = R"json({
  "name": "continuous-counterexample",
  "time": {"kind": "continuous", "t_end": 20, "h": 0.001},
  "omega": {"probs": [0.5, 0.5]},
  "objective": {"builtin": "quadlin-continuous",
                "params": {"alpha": [1, 2], "beta": [0.5, 0.4], "gamma": [0.25, 0.2]}},
  "path": {"kind": "closed-form", "name": "constant-alpha"},
  "perturbation": {"kind": "ramp", "value": [1, 1], "end": 1, "vanishing_head": 2},
  "tolerances": {"euler": 1e-6, "tvc": 1e-4}
})json";

constexpr const char* kHousehold = R"json({
  "name": "household",
  "time": {"kind": "discrete", "t_max": 12},
  "omega": {"probs": [0.5, 0.5]},
  "objective": {"builtin": "household-log", "params": {"discount": 0.9, "n": 2}},
  "path": {"kind": "solve"},
  "solve": {"boundary": "fixed:4",
            "head": [[1, 1, 1, 1], [1, 1, 1, 1]],
            "tail": [[0.2, 0.1], [0.2, 0.1]],
            "tolerance": 1e-12},
  "tolerances": {"euler": 1e-10}
})json";

constexpr const char* kHouseholdBrute = R"json({
  "name": "household-brute-force",
  "time": {"kind": "discrete", "t_max": 8},
  "omega": {"probs": [0.5, 0.5]},
  "objective": {"builtin": "household-log", "params": {"discount": 0.9, "n": 2}},
  "path": {"kind": "solve"},
  "solve": {"boundary": "fixed:4",
            "head": [[1, 1, 1, 1], [1, 1, 1, 1]],
            "tail": [[0.2, 0.1], [0.2, 0.1]],
            "tolerance": 1e-12,
            "brute_force": {"free": [4, 5, 6], "min": 1, "max": 2, "points": 21}}
})json";

constexpr const char* kDslQuadratic = R"json({
  "name": "dsl-quadratic",
  "time": {"kind": "discrete", "t_max": 20},
  "omega": {"probs": [0.5, 0.5]},
  "order": 2,
  "objective": {"expr": "(y0 - a)^2 + b*y1 + c*y2",
                "constants": {"a": [1, 2], "b": [0.5, 0.4], "c": [0.25, 0.2]}},
  "path": {"kind": "constant", "value": [1, 2]}
})json";

constexpr const char* kDslLog = R"json({
  "name": "dsl-log",
  "time": {"kind": "discrete", "t_max": 20},
  "omega": {"probs": [0.5, 0.5]},
  "order": 2,
  "objective": {"expr": "exp(t*ln(d)) * ln(y0 + y1 - y2)", "constants": {"d": [0.9, 0.9]}},
  "path": {"kind": "constant", "value": [1, 1]}
})json";

struct Demo {
    std::uint64_t seed;
    Json checks = Json::array();
    Json results = Json::object();
    Json scenarios = Json::array();

    Scenario load(const char* text) {
        Json j = Json::parse(text);
        j["seed"] = seed;
        Scenario s = scenario_from_json(j);
        scenarios.push_back(scenario_to_json(s));
        return s;
    }

    void near(const std::string& name, double expected, double observed, double tol) {
        const bool pass = std::isfinite(observed) && std::abs(observed - expected) <= tol;
        checks.push_back(
            Json{{"name", name}, {"expected", expected}, {"observed", observed}, {"tolerance", tol}, {"pass", pass}});
    }

    void at_most(const std::string& name, double bound, double observed) {
        const bool pass = std::isfinite(observed) && observed <= bound;
        checks.push_back(Json{{"name", name},
                              {"expected", "<= " + Json(bound).dump()},
                              {"observed", observed},
                              {"tolerance", bound},
                              {"pass", pass}});
    }

    void same(const std::string& name, const Json& expected, const Json& observed) {
        checks.push_back(Json{{"name", name},
                              {"expected", expected},
                              {"observed", observed},
                              {"tolerance", nullptr},
                              {"pass", expected == observed}});
    }
};

double max_abs_diff_from(const std::vector<double>& xs, double target) {
    double m = 0.0;
    for (double x : xs) {
        m = std::max(m, std::abs(x - target));
    }
    return m;
}

void demo_discrete_counterexample(Demo& d) {
    const Scenario solve = d.load(kQuadlinSolve);
    const DiscreteObjective obj = build_discrete(solve);
    const SolveResult sol = newton_euler_solve(obj, build_solve_spec(solve), solve.omega);
    const QuadLinParams& q = solve.objective.quadlin;
    double err = 0.0;
    for (int t = 0; t <= 20; ++t) {
        for (int w = 0; w < 2; ++w) {
            const auto i = static_cast<std::size_t>(w);
            const double closed = t == 0 ? q.alpha[i] : t == 1 ? q.alpha[i] - q.beta[i] / 2.0
                                                               : q.alpha[i] - (q.beta[i] + q.gamma[i]) / 2.0;
            err = std::max(err, std::abs(sol.path(t, w) - closed));
        }
    }
    d.at_most("solve: closed-form path, max abs error", 1e-8, err);
    d.same("solve: y(1) per state", Json::array({0.75, 1.8}), Json::array({sol.path(1, 0), sol.path(1, 1)}));
    const EulerReport er = euler_report(obj, solve.omega, sol.path, BoundaryMode::truncated(), 1e-10);
    d.at_most("solve: Euler residual max abs", 1e-10, er.max_abs);

    const Scenario ex = d.load(kQuadlinCounter);
    const Json tvc = command_report("tvc", ex);
    const Json& r = tvc["results"];
    d.at_most("tvc: every tail equals 0.9", 1e-10, max_abs_diff_from(r["values"].get<std::vector<double>>(), 0.9));
    d.near("tvc: liminf estimate", 0.9, r["liminf_estimate"].get<double>(), 1e-10);
    d.same("tvc: verdict", "VIOLATED", r["comparisons"]["liminf_le_zero"]);
    d.same("tvc: exit code", 1, tvc["exit_code"]);
    d.at_most("tvc: first-variation decomposition discrepancy", 1e-6, r["decomposition"]["discrepancy"].get<double>());
    d.results["tvc_counterexample"] = r;

    const Json euler = command_report("euler", ex);
    d.same("euler: closed form exit code", 0, euler["exit_code"]);

    const DiscreteObjective V = build_discrete(ex);
    const StochasticPath base = build_path(ex);
    const StochasticPath bumped = base.with_value(5, 0, 0, base(5, 0) + 0.1);
    d.near("euler: bump y(5) by 0.1 gives residual 0.2", 0.2, discrete_euler_residual(V, bumped, 5)[0], 1e-12);

    const Scenario compact = d.load(kQuadlinCompact);
    const TvcReport cr = tvc_liminf_discrete(build_discrete(compact), compact.omega, build_path(compact),
                                             build_curve(compact, build_path(compact)), std::nullopt, 1e-8);
    d.near("tvc compact support: liminf estimate", 0.0, cr.liminf_estimate, 1e-10);
    d.same("tvc compact support: verdict", "SATISFIED", cr.satisfied ? "SATISFIED" : "VIOLATED");
}

void demo_continuous_counterexample(Demo& d) {
    const Scenario s = d.load(kContinuousCounter);
    const ContinuousObjective v = build_continuous(s);
    const StochasticPath x = build_path(s);
    const EulerReport er = euler_report(v, s.omega, x, 1e-6);
    d.at_most("euler: interior residual max abs", 1e-6, er.max_abs);

    const PerturbationCurve p = build_curve(s, x);
    const TvcReport rep = tvc_liminf_continuous(v, s.omega, x, p, {}, 1e-4);
    std::vector<double> late;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        if (rep.times[i] >= 2.0) {
            late.push_back(rep.values[i]);
        }
    }
    d.at_most("bracket: equals E beta = 0.45 for T >= 2", 1e-4, max_abs_diff_from(late, 0.45));
    d.same("bracket: verdict", "VIOLATED", rep.satisfied ? "SATISFIED" : "VIOLATED");
    d.results["bracket_counterexample"] = Json{{"times", rep.times}, {"values", rep.values},
                                            {"liminf_estimate", rep.liminf_estimate}};

    const PerturbationCurve kami = kamihigashi_curve(x, 0.5, {1.0, 2});
    const double kb = continuous_boundary_term(v, s.omega, x, kami, 5.0) -
                      continuous_boundary_term(v, s.omega, x, kami, 0.0);
    d.near("kamihigashi curve (level 0.5): bracket 0.325", 0.325, kb, 1e-4);

    const PerturbationCurve compact = compact_ramp_curve(s.time, {1.0, 1.0}, 8.0, 10.0, {1.0, 2});
    const TvcReport cr = tvc_liminf_continuous(v, s.omega, x, compact, {}, 1e-4);
    d.near("compact ramp: liminf estimate", 0.0, cr.liminf_estimate, 1e-4);
    d.same("compact ramp: verdict", "SATISFIED", cr.satisfied ? "SATISFIED" : "VIOLATED");

    const DecompositionCheck dc = variation_decomposition_check(v, s.omega, x, p, 10.0);
    d.at_most("first-variation decomposition discrepancy (T' = 10)", 1e-4, dc.discrepancy);
}

void demo_assumption(Demo& d) {
    const Scenario s = d.load(kQuadlinCounter);
    const DiscreteObjective V = build_discrete(s);
    const StochasticPath y = build_path(s);
    const PerturbationCurve q = build_curve(s, y);
    const DiagnosticMatrix m = a_grid(V, s.omega, y, q, s.diagnostics.eps_grid, s.diagnostics.tprime_grid);
    const UniformityVerdict u = uniformity_verdict(m, s.tolerances.uniformity);
    d.same("eventually-constant q: verdict", "NON_UNIFORM", to_string(u.verdict));
    double slope_err = 0.0;
    for (int c = 0; c < m.cols(); ++c) {
        const double eps = m.eps_grid[static_cast<std::size_t>(c)];
        slope_err = std::max(slope_err, std::abs(u.limits.growth[static_cast<std::size_t>(c)].slope - eps) / eps);
    }
    d.at_most("eventually-constant q: A slope in T' equals eps (relative error)", 0.05, slope_err);
    double closed_err = 0.0;
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            const double tp = m.tprime_grid[static_cast<std::size_t>(r)];
            const double eps = m.eps_grid[static_cast<std::size_t>(c)];
            closed_err = std::max(closed_err,
                                  std::abs(m.values[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -
                                           (eps * tp + 0.9)));
        }
    }
    d.at_most("eventually-constant q: A(T', eps) = eps T' + 0.9", 1e-6, closed_err);

    const PerturbationCurve q2 = q.scaled(2.0);
    std::vector<double> eps2 = s.diagnostics.eps_grid;
    for (double& e : eps2) {
        e *= 2.0;
    }
    const UniformityVerdict u2 =
        uniformity_verdict(a_grid(V, s.omega, y, q2, s.diagnostics.eps_grid, s.diagnostics.tprime_grid));
    const UniformityVerdict u3 = uniformity_verdict(a_grid(V, s.omega, y, q, eps2, s.diagnostics.tprime_grid));
    d.same("scaling q by 2 matches scaling eps by 2", to_string(u3.verdict), to_string(u2.verdict));

    const Scenario c = d.load(kQuadlinCompact);
    const StochasticPath yc = build_path(c);
    const DiagnosticMatrix mc = a_grid(build_discrete(c), c.omega, yc, build_curve(c, yc), c.diagnostics.eps_grid,
                                       c.diagnostics.tprime_grid);
    const UniformityVerdict uc = uniformity_verdict(mc, c.tolerances.uniformity);
    d.same("compact-support q: verdict", "UNIFORM", to_string(uc.verdict));
    d.at_most("compact-support q: iterated-limit gap", 1e-6, uc.limit_gap);

    std::vector<int> times;
    for (double t : s.diagnostics.sample_times) {
        times.push_back(static_cast<int>(t));
    }
    const DominationReport dom = domination_check(V, y, q, s.diagnostics.eps_bar, times, s.diagnostics.levels);
    d.same("domination: eventually-constant q", "bounded on tested grid",
           dom.bounded ? "bounded on tested grid" : "growth detected");
    d.results["assumption"] = command_report("assume", s)["results"];
}

std::vector<CorrespondenceSample> correspondence_samples(std::uint64_t seed, int count, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(lo, hi);
    std::uniform_int_distribution<int> tdist(0, 20);
    std::uniform_int_distribution<int> wdist(0, 1);
    std::vector<CorrespondenceSample> out;
    for (int i = 0; i < count; ++i) {
        CorrespondenceSample c;
        for (double& y : c.y) {
            y = val(rng);
        }
        c.t = tdist(rng);
        c.omega = wdist(rng);
        out.push_back(c);
    }
    return out;
}

void demo_correspondence(Demo& d) {
    const auto samples = correspondence_samples(d.seed, 100, 0.5, 2.0);
    auto record = [&](const std::string& label, const CorrespondencePair& pair) {
        const CorrespondenceReport r = correspondence_check(pair, samples);
        d.at_most(label + ": partial identities v1 = V1+V2+V3, v2 = V2+2V3, v3 = V3", r.tolerance, r.partial_gap);
        d.at_most(label + ": Euler row equals its first-difference form", r.tolerance, r.euler_gap);
        d.at_most(label + ": v partials against finite differences", r.fd_tolerance, r.fd_gap);
        d.results[label] = Json{{"partial_gap", r.partial_gap}, {"euler_gap", r.euler_gap}, {"fd_gap", r.fd_gap},
                                {"checked", r.checked},         {"skipped", r.skipped}};
    };
    const Scenario ex = d.load(kQuadlinCounter);
    record("quadlin chain rule", discrete_to_continuous(build_discrete(ex)));
    const Scenario quad = d.load(kDslQuadratic);
    record("dsl quadratic symbolic", discrete_to_continuous(*build_dsl(quad)));
    const Scenario lg = d.load(kDslLog);
    record("dsl log symbolic", discrete_to_continuous(*build_dsl(lg)));
    const Scenario hh = d.load(kHousehold);
    record("household chain rule", discrete_to_continuous(build_discrete(hh)));
}

void demo_household(Demo& d) {
    const DiscreteObjective V = household_log(0.9, 2);
    const double beta = 0.9;
    std::mt19937_64 rng(d.seed);
    std::uniform_real_distribution<double> dist(0.5, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        std::vector<double> y(31);
        std::vector<double> c(29);
        y[0] = dist(rng);
        y[1] = dist(rng);
        for (int t = 0; t + 2 <= 30; ++t) {
            c[static_cast<std::size_t>(t)] = dist(rng);
            y[static_cast<std::size_t>(t) + 2] =
                y[static_cast<std::size_t>(t)] + y[static_cast<std::size_t>(t) + 1] - c[static_cast<std::size_t>(t)];
        }
        const StochasticPath path(TimeDomain::discrete(30), 1, 1, y);
        for (int t = 4; t <= 28; ++t) {
            const auto i = static_cast<std::size_t>(t);
            const double analytic =
                std::pow(beta, t - 2) * (-1.0 / c[i - 2] + beta / c[i - 1] + beta * beta / c[i]);
            const double generic = discrete_euler_residual_at(V, path, t, 0);
            worst = std::max(worst, std::abs(generic - analytic) / std::max(1.0, std::abs(analytic)));
        }
    }
    d.at_most("Euler identity on 20 random consumption paths (relative)", 1e-9, worst);

    const StochasticPath ones = StochasticPath::scalar(TimeDomain::discrete(10), 1, [](double, int) { return 1.0; });
    d.near("constant path: residual at t = 5", 0.51759, discrete_euler_residual_at(V, ones, 5, 0), 1e-12);

    const Scenario s = d.load(kHousehold);
    const Json solve = command_report("solve", s);
    d.same("Newton solve: exit code", 0, solve["exit_code"]);
    d.same("Newton solve: curvature", Json::array({"max", "max"}), solve["results"]["stationarity"]);
    d.at_most("Newton solve: Euler residual max abs", 1e-10, solve["results"]["euler_max_abs"].get<double>());
    d.results["household_solve"] = solve["results"];

    const Scenario b = d.load(kHouseholdBrute);
    const Json brute = command_report("solve", b);
    const Json& bf = brute["results"]["brute_force"];
    d.at_most("brute force within one grid cell of Newton", bf["grid_cell"].get<double>(),
              bf["max_distance"].get<double>());
    d.at_most("brute-force value minus Newton value", 1e-9 * std::max(1.0, std::abs(bf["newton_value"].get<double>())),
              bf["value"].get<double>() - bf["newton_value"].get<double>());
    d.results["household_brute_force"] = bf;

    std::vector<PointSample<int>> pts;
    std::uniform_int_distribution<int> tdist(2, 20);
    for (int i = 0; i < 100; ++i) {
        const double a = dist(rng);
        const double bb = dist(rng);
        const double cc = dist(rng);
        pts.push_back({Slots(2, 1, {a, bb, a + bb - cc}), tdist(rng), 0});
    }
    const GradientCheckReport g = gradient_check(V, pts, 1e-6);
    d.at_most("gradient check: analytic vs finite-difference partials", 1e-6, g.max_gap);
}

}  // namespace

std::vector<std::string> demo_presets() {
    return {"continuous-counterexample", "discrete-counterexample", "assumption", "correspondence", "household"};
}

std::vector<Json> demo_scenarios(const std::string& preset) {
    auto parse = [](std::initializer_list<const char*> texts) {
        std::vector<Json> out;
        for (const char* t : texts) {
            out.push_back(Json::parse(t));
        }
        return out;
    };
    if (preset == "continuous-counterexample") return parse({kContinuousCounter});
    if (preset == "discrete-counterexample") return parse({kQuadlinSolve, kQuadlinCounter, kQuadlinCompact});
    if (preset == "assumption") return parse({kQuadlinCounter, kQuadlinCompact});
    if (preset == "correspondence") return parse({kQuadlinCounter, kDslQuadratic, kDslLog, kHousehold});
    if (preset == "household") return parse({kHousehold, kHouseholdBrute});
    throw InputError("unknown demo preset '" + preset + "'");
}

Json demo_report(const std::string& preset, std::uint64_t seed) {
    std::vector<std::string> names = preset == "all" ? demo_presets() : std::vector<std::string>{preset};
    Demo all{seed};
    for (const auto& name : names) {
        Demo d{seed};
        if (name == "discrete-counterexample") {
            demo_discrete_counterexample(d);
        } else if (name == "continuous-counterexample") {
            demo_continuous_counterexample(d);
        } else if (name == "assumption") {
            demo_assumption(d);
        } else if (name == "correspondence") {
            demo_correspondence(d);
        } else if (name == "household") {
            demo_household(d);
        } else {
            throw InputError("unknown demo preset '" + name + "' (continuous-counterexample, discrete-counterexample, assumption, "
                             "correspondence, household, all)");
        }
        for (auto& c : d.checks) {
            if (names.size() > 1) {
                c["name"] = name + " / " + c["name"].get<std::string>();
            }
            all.checks.push_back(c);
        }
        for (auto& s : d.scenarios) {
            all.scenarios.push_back(s);
        }
        all.results[name] = d.results;
    }
    int code = kExitPass;
    for (const auto& c : all.checks) {
        if (!c["pass"].get<bool>()) {
            code = kExitVerdictFailed;
        }
    }
    return Json{{"command", "demo"},
                {"preset", preset},
                {"toolkit_version", kToolkitVersion},
                {"seed", seed},
                {"scenarios", all.scenarios},
                {"checks", all.checks},
                {"results", all.results},
                {"exit_code", code}};
}

}  // namespace tvckit
