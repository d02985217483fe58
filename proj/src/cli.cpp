#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "tvckit/cli.hpp"
#include "tvckit/correspondence.hpp"
#include "tvckit/diagnostics.hpp"
#include "tvckit/tvc.hpp"

namespace tvckit {

namespace {

constexpr int kMaxReportRows = 200;

Json verdict(const std::string& name, const std::string& value_label, double tolerance, double value, bool pass) {
    return Json{{"name", name}, {"verdict", value_label}, {"tolerance", tolerance}, {"value", value}, {"pass", pass}};
}

Json path_json(const StochasticPath& path, int stride = 1) {
    Json rows = Json::array();
    for (int i = 0; i < path.points(); i += stride) {
        Json row = Json::array();
        for (int w = 0; w < path.states(); ++w) {
            row.push_back(path(i, w));
        }
        rows.push_back(row);
    }
    return rows;
}

Json limit_json(const LimitEstimate& e) {
    return Json{{"text", describe(e)},
                {"diverges", e.diverges},
                {"inconclusive", e.inconclusive},
                {"value", e.value},
                {"error", e.error}};
}

Json decomposition_json(const DecompositionCheck& d, double tprime, double tolerance) {
    return Json{{"tprime", tprime},
                {"direct", d.direct},
                {"boundary", d.boundary},
                {"interior", d.interior},
                {"tail", d.tail},
                {"discrepancy", d.discrepancy},
                {"tolerance", tolerance},
                {"pass", d.discrepancy <= tolerance}};
}

// Closed-form Euler path of the discrete quadratic-linear model.
double quadlin_euler_value(const QuadLinParams& q, int t, int w) {
    const auto i = static_cast<std::size_t>(w);
    if (t == 0) return q.alpha[i];
    if (t == 1) return q.alpha[i] - q.beta[i] / 2.0;
    return q.alpha[i] - (q.beta[i] + q.gamma[i]) / 2.0;
}

void push_warnings(const Scenario& s, Json& caveats) {
    for (const auto& w : s.warnings) {
        caveats.push_back(w);
    }
}

Json euler_results(const Scenario& s, Json& verdicts, Json& caveats) {
    const StochasticPath path = build_path(s);
    EulerReport rep = s.discrete() ? euler_report(build_discrete(s), s.omega, path, s.boundary, s.tolerances.euler)
                                   : euler_report(build_continuous(s), s.omega, path, s.tolerances.euler);
    const int total = static_cast<int>(rep.times.size());
    const int stride = std::max(1, (total + kMaxReportRows - 1) / kMaxReportRows);
    Json rows = Json::array();
    for (int i = 0; i < total; i += stride) {
        const auto k = static_cast<std::size_t>(i);
        rows.push_back(Json{{"t", rep.times[k]}, {"expected", rep.expected[k]}, {"residual", rep.residuals[k]}});
    }
    Json results{{"mode", rep.mode},
                 {"rows_total", total},
                 {"row_stride", stride},
                 {"rows", rows},
                 {"max_abs", rep.max_abs},
                 {"worst_t", rep.worst_row >= 0 ? Json(rep.times[static_cast<std::size_t>(rep.worst_row)]) : Json()},
                 {"analytic_partials", rep.analytic_partials}};
    verdicts.push_back(verdict("euler", rep.stationary ? "STATIONARY" : "NOT_STATIONARY", rep.tolerance, rep.max_abs,
                               rep.stationary));
    if (s.discrete()) {
        caveats.push_back("right-end truncation: Euler rows stop at T_max - n so that every window fits");
    } else {
        caveats.push_back("continuous residuals use second-order finite differences; rows within n*h of the ends are "
                          "omitted");
    }
    if (!rep.analytic_partials) {
        caveats.push_back("slot partials by central finite differences");
    }
    return results;
}

Json tvc_results(const Scenario& s, Json& verdicts, Json& caveats) {
    const StochasticPath path = build_path(s);
    const PerturbationCurve curve = build_curve(s, path);
    TvcReport rep;
    Json decomposition;
    if (s.discrete()) {
        const DiscreteObjective obj = build_discrete(s);
        rep = tvc_liminf_discrete(obj, s.omega, path, curve, std::nullopt, s.tolerances.tvc);
        const int tprime = std::min(12, s.time.t_max() - s.order);
        decomposition = decomposition_json(variation_decomposition_check(obj, s.omega, path, curve, tprime), tprime,
                                           1e-6);
    } else {
        const ContinuousObjective obj = build_continuous(s);
        rep = tvc_liminf_continuous(obj, s.omega, path, curve, {}, s.tolerances.tvc);
        const double tprime = std::min(10.0, std::floor(s.time.t_end() / 2.0));
        decomposition = decomposition_json(variation_decomposition_check(obj, s.omega, path, curve, tprime), tprime,
                                           1e-4);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < rep.running_inf.size(); ++i) {
        monotone = monotone && rep.running_inf[i] >= rep.running_inf[i - 1];
    }
    Json results{{"kind", s.discrete() ? "discrete-tail" : "continuous-bracket"},
                 {"times", rep.times},
                 {"values", rep.values},
                 {"running_inf", rep.running_inf},
                 {"running_sup", rep.running_sup},
                 {"running_inf_monotone", monotone},
                 {"window", rep.window},
                 {"liminf_estimate", rep.liminf_estimate},
                 {"limsup_estimate", rep.limsup_estimate},
                 {"comparisons",
                  {{"liminf_le_zero", rep.satisfied ? "SATISFIED" : "VIOLATED"},
                   {"limsup_ge_zero", rep.limsup_holds},
                   {"equals_zero", rep.equals_zero}}},
                 {"decomposition", decomposition}};
    verdicts.push_back(verdict("tvc", rep.satisfied ? "SATISFIED" : "VIOLATED", rep.tolerance, rep.liminf_estimate,
                               rep.satisfied));
    verdicts.push_back(verdict("decomposition", decomposition["pass"].get<bool>() ? "CONSISTENT" : "INCONSISTENT",
                               decomposition["tolerance"].get<double>(), decomposition["discrepancy"].get<double>(),
                               decomposition["pass"].get<bool>()));
    if (rep.finite_horizon) {
        caveats.push_back("finite-horizon estimate: liminf and limsup come from the last " + std::to_string(rep.window) +
                          " horizons of a truncated sequence");
    }
    return results;
}

Json assume_results(const Scenario& s, Json& verdicts, Json& caveats, DiagnosticMatrix* matrix_out) {
    const StochasticPath path = build_path(s);
    const PerturbationCurve curve = build_curve(s, path);
    const DiagnosticsSpec& d = s.diagnostics;
    DiagnosticMatrix m;
    DominationReport dom;
    if (s.discrete()) {
        const DiscreteObjective obj = build_discrete(s);
        m = a_grid(obj, s.omega, path, curve, d.eps_grid, d.tprime_grid);
        std::vector<int> times;
        for (double t : d.sample_times) {
            if (t != std::floor(t)) {
                throw ScenarioError("diagnostics.sample_times", "discrete sample times must be integers");
            }
            times.push_back(static_cast<int>(t));
        }
        dom = domination_check(obj, path, curve, d.eps_bar, times, d.levels);
    } else {
        const ContinuousObjective obj = build_continuous(s);
        m = a_grid(obj, s.omega, path, curve, d.eps_grid, d.tprime_grid);
        dom = domination_check(obj, path, curve, d.eps_bar, d.sample_times, d.levels);
    }
    const UniformityVerdict u = uniformity_verdict(m, s.tolerances.uniformity);

    Json status = Json::array();
    for (const auto& row : m.status) {
        Json r = Json::array();
        for (CellStatus c : row) {
            r.push_back(to_string(c));
        }
        status.push_back(r);
    }
    Json growth = Json::array();
    for (std::size_t c = 0; c < u.limits.growth.size(); ++c) {
        const GrowthFit& g = u.limits.growth[c];
        growth.push_back(Json{{"eps", m.eps_grid[c]},
                              {"slope", g.slope},
                              {"slope_se", g.slope_se},
                              {"points", g.points},
                              {"growth", g.growth},
                              {"limit_T", limit_json(u.limits.along_T[c])}});
    }
    Json along_eps = Json::array();
    for (const auto& e : u.limits.along_eps) {
        along_eps.push_back(limit_json(e));
    }
    Json cells = Json::array();
    for (const auto& c : dom.cells) {
        cells.push_back(Json{{"t", c.t},
                             {"omega", c.omega},
                             {"sup", c.sup},
                             {"sup_eps", c.sup_eps},
                             {"growth", c.growth},
                             {"domain_error", c.domain_error}});
    }
    Json results{
        {"matrix",
         {{"eps_grid", m.eps_grid}, {"tprime_grid", m.tprime_grid}, {"values", m.values}, {"status", status},
          {"flagged", m.flagged()}}},
        {"iterated_limits",
         {{"sufficient", u.limits.sufficient},
          {"eps_then_T", limit_json(u.limits.eps_then_T)},
          {"T_then_eps", limit_json(u.limits.T_then_eps)},
          {"columns", growth},
          {"rows", along_eps}}},
        {"uniformity",
         {{"verdict", to_string(u.verdict)},
          {"reason", u.reason},
          {"limit_gap", u.limit_gap},
          {"max_growth_slope", u.max_growth_slope},
          {"deviation_profile", u.deviation_profile},
          {"asserted", d.assert_uniform}}},
        {"domination",
         {{"eps_bar", dom.eps_bar},
          {"eps_grid", dom.eps_grid},
          {"cells", cells},
          {"bound", dom.bound},
          {"flagged", dom.flagged},
          {"verdict", dom.bounded ? "bounded on tested grid" : "growth detected"}}}};

    const bool uniform_fail = d.assert_uniform && u.verdict == Uniformity::non_uniform;
    verdicts.push_back(verdict("uniformity", to_string(u.verdict), u.tolerance, u.limit_gap, !uniform_fail));
    const bool dom_fail = d.assert_uniform && !dom.bounded;
    verdicts.push_back(verdict("domination", dom.bounded ? "BOUNDED_ON_GRID" : "GROWTH_DETECTED", 0.0, dom.bound,
                               !dom_fail));
    caveats.push_back("uniformity and domination are judged on finite grids; they are evidence, not proofs");
    if (!d.assert_uniform) {
        caveats.push_back("assumptions not asserted: NON_UNIFORM or growth does not change the exit code");
    }
    if (matrix_out) {
        *matrix_out = std::move(m);
    }
    return results;
}

Json solve_results(const Scenario& s, Json& verdicts, Json& caveats) {
    const DiscreteObjective obj = build_discrete(s);
    const SolveSpec spec = build_solve_spec(s);
    const SolveResult sol = newton_euler_solve(obj, spec, s.omega);
    const EulerReport er = euler_report(obj, s.omega, sol.path, spec.mode, s.tolerances.euler);

    Json results{{"horizon", spec.horizon},
                 {"boundary", spec.mode.to_string()},
                 {"iterations", sol.iterations},
                 {"max_residual", sol.max_residual},
                 {"residual_history", sol.residual_history},
                 {"stationarity", sol.stationarity},
                 {"path", path_json(sol.path)},
                 {"euler_max_abs", er.max_abs}};
    verdicts.push_back(verdict("newton", "CONVERGED", spec.tolerance, sol.max_residual, true));
    verdicts.push_back(
        verdict("euler", er.stationary ? "STATIONARY" : "NOT_STATIONARY", er.tolerance, er.max_abs, er.stationary));

    if (s.objective.builtin == "quadlin-discrete" && spec.mode.kind == BoundaryMode::Kind::truncated) {
        double err = 0.0;
        for (int t = 0; t <= spec.horizon; ++t) {
            for (int w = 0; w < s.omega.states(); ++w) {
                err = std::max(err, std::abs(sol.path(t, w) - quadlin_euler_value(s.objective.quadlin, t, w)));
            }
        }
        results["closed_form_max_error"] = err;
        verdicts.push_back(verdict("closed_form", err <= 1e-8 ? "MATCH" : "MISMATCH", 1e-8, err, err <= 1e-8));
    }

    if (s.solve->brute_force) {
        const BruteForceSettings& b = *s.solve->brute_force;
        BruteForceSpec bf{sol.path, b.free, {}, spec.horizon};
        std::vector<double> grid;
        for (int i = 0; i < b.points; ++i) {
            grid.push_back(b.min + (b.max - b.min) * i / (b.points - 1));
        }
        bf.grid.assign(b.free.size(), grid);
        const BruteForceResult r = brute_force_solve(obj, s.omega, bf);
        const double cell = (b.max - b.min) / (b.points - 1);
        double dist = 0.0;
        for (int t : b.free) {
            for (int w = 0; w < s.omega.states(); ++w) {
                dist = std::max(dist, std::abs(r.path(t, w) - sol.path(t, w)));
            }
        }
        const double newton_value = truncated_value(obj, s.omega, sol.path, spec.horizon);
        const double slack = 1e-9 * std::max(1.0, std::abs(newton_value));
        const bool value_ok = r.value <= newton_value + slack;
        results["brute_force"] = Json{{"free", b.free},
                                      {"grid", {{"min", b.min}, {"max", b.max}, {"points", b.points}}},
                                      {"path", path_json(r.path)},
                                      {"value", r.value},
                                      {"newton_value", newton_value},
                                      {"evaluated", r.evaluated},
                                      {"skipped", r.skipped},
                                      {"max_distance", dist},
                                      {"grid_cell", cell}};
        verdicts.push_back(verdict("brute_force_distance", dist <= cell ? "WITHIN_ONE_CELL" : "OUTSIDE_ONE_CELL", cell,
                                   dist, dist <= cell));
        verdicts.push_back(verdict("brute_force_value", value_ok ? "NOT_ABOVE_NEWTON" : "ABOVE_NEWTON", slack,
                                   r.value - newton_value, value_ok));
    }
    caveats.push_back("the solver finds a stationary point of the Euler system; curvature labels say whether it is a "
                      "maximum");
    return results;
}

Json correspond_results(const Scenario& s, Json& verdicts, Json&) {
    if (!s.discrete()) {
        throw UnsupportedError("correspond needs a discrete order-2 objective");
    }
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> val(s.correspondence.min, s.correspondence.max);
    std::uniform_int_distribution<int> tdist(0, 20);
    std::uniform_int_distribution<int> wdist(0, s.omega.states() - 1);
    std::vector<CorrespondenceSample> samples;
    for (int i = 0; i < s.correspondence.samples; ++i) {
        CorrespondenceSample c;
        for (double& y : c.y) {
            y = val(rng);
        }
        c.t = tdist(rng);
        c.omega = wdist(rng);
        samples.push_back(c);
    }
    auto report_json = [&](const std::string& name, const CorrespondencePair& pair) {
        CorrespondenceReport r = correspondence_check(pair, samples);
        const double tol = std::max(r.tolerance, s.tolerances.correspondence);
        const bool pass = r.checked > 0 && r.partial_gap <= tol && r.euler_gap <= tol && r.fd_gap <= r.fd_tolerance;
        verdicts.push_back(verdict(name, pass ? "HOLDS" : "FAILS", tol, std::max(r.partial_gap, r.euler_gap), pass));
        return Json{{"partial_gap", r.partial_gap}, {"fd_gap", r.fd_gap},       {"euler_gap", r.euler_gap},
                    {"tolerance", tol},             {"fd_tolerance", r.fd_tolerance}, {"checked", r.checked},
                    {"skipped", r.skipped},         {"pass", pass}};
    };
    const DiscreteObjective V = build_discrete(s);
    Json results{{"samples", s.correspondence.samples}, {"chain_rule", report_json("correspondence_chain_rule",
                                                                                   discrete_to_continuous(V))}};
    if (auto dsl = build_dsl(s)) {
        const CorrespondencePair pair = discrete_to_continuous(*dsl);
        results["symbolic"] = report_json("correspondence_symbolic", pair);
        results["induced_expr"] = pair.v.name();
    }
    return results;
}

void write_text(const RunOptions& opts, std::ostream& out, const std::string& text) {
    if (!opts.out) {
        out << text;
        return;
    }
    std::ofstream f(*opts.out, std::ios::binary);
    if (!f) {
        throw InputError("cannot write '" + opts.out->string() + "'");
    }
    f << text;
}

Json error_report(const RunOptions& opts, const std::string& kind, const std::string& message, int code,
                  const std::string& key_path = {}) {
    Json e{{"kind", kind}, {"message", message}};
    if (!key_path.empty()) {
        e["key_path"] = key_path;
    }
    return Json{{"command", opts.command}, {"toolkit_version", kToolkitVersion}, {"error", e}, {"exit_code", code}};
}

}  // namespace

void apply_overrides(Json& j, const RunOptions& opts) {
    if (!j.is_object()) {
        throw ScenarioError("<root>", "expected an object");
    }
    if (opts.tmax) {
        if (!j.contains("time") || !j["time"].is_object() || j["time"].value("kind", "") != "discrete") {
            throw InputError("--tmax applies to discrete scenarios only");
        }
        j["time"]["t_max"] = *opts.tmax;
    }
    if (opts.eps_grid) {
        j["diagnostics"]["eps_grid"] = *opts.eps_grid;
    }
    if (opts.seed) {
        j["seed"] = *opts.seed;
    }
    if (opts.tolerance) {
        const std::string& c = opts.command;
        if (c == "solve") {
            j["solve"]["tolerance"] = *opts.tolerance;
        } else if (c == "euler" || c == "tvc") {
            j["tolerances"][c] = *opts.tolerance;
        } else if (c == "correspond") {
            j["tolerances"]["correspondence"] = *opts.tolerance;
        } else if (c == "assume") {
            j["tolerances"]["uniformity"] = *opts.tolerance;
        }
    }
    if (opts.boundary) {
        if (opts.command == "solve") {
            j["solve"]["boundary"] = *opts.boundary;
        } else {
            j["boundary"] = *opts.boundary;
        }
    }
}

int verdict_exit_code(const Json& verdicts) {
    for (const auto& v : verdicts) {
        if (!v.at("pass").get<bool>()) {
            return kExitVerdictFailed;
        }
    }
    return kExitPass;
}

Json command_report(const std::string& command, const Scenario& s) {
    Json verdicts = Json::array();
    Json caveats = Json::array();
    push_warnings(s, caveats);
    Json results;
    if (command == "euler") {
        results = euler_results(s, verdicts, caveats);
    } else if (command == "tvc") {
        results = tvc_results(s, verdicts, caveats);
    } else if (command == "assume") {
        results = assume_results(s, verdicts, caveats, nullptr);
    } else if (command == "solve") {
        results = solve_results(s, verdicts, caveats);
    } else if (command == "correspond") {
        results = correspond_results(s, verdicts, caveats);
    } else {
        throw InputError("unknown command '" + command + "'");
    }
    const int code = verdict_exit_code(verdicts);
    return Json{{"command", command},
                {"toolkit_version", kToolkitVersion},
                {"seed", s.seed},
                {"scenario", scenario_to_json(s)},
                {"results", results},
                {"verdicts", verdicts},
                {"caveats", caveats},
                {"exit_code", code}};
}

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    Json report;
    int code = kExitPass;
    try {
        if (opts.format != "json" && opts.format != "csv") {
            throw InputError("--format must be json or csv");
        }
        if (opts.command == "demo") {
            if (opts.format == "csv") {
                throw InputError("--format csv applies to the assume command only");
            }
            report = demo_report(opts.preset, opts.seed.value_or(12345));
        } else {
            if (!opts.scenario) {
                throw InputError("--scenario is required for '" + opts.command + "'");
            }
            Json raw = read_json_file(*opts.scenario);
            apply_overrides(raw, opts);
            const Scenario s = scenario_from_json(raw);
            if (opts.format == "csv") {
                if (opts.command != "assume") {
                    throw InputError("--format csv applies to the assume command only");
                }
                Json verdicts = Json::array();
                Json caveats = Json::array();
                DiagnosticMatrix m;
                assume_results(s, verdicts, caveats, &m);
                write_text(opts, out, matrix_csv(m));
                code = verdict_exit_code(verdicts);
                if (!opts.quiet) {
                    err << "assume: matrix " << m.rows() << "x" << m.cols() << ", exit " << code << "\n";
                }
                return code;
            }
            report = command_report(opts.command, s);
        }
        code = report.at("exit_code").get<int>();
    } catch (const ScenarioError& e) {
        code = kExitInputError;
        report = error_report(opts, "input", e.what(), code, e.key_path());
    } catch (const InputError& e) {
        code = kExitInputError;
        report = error_report(opts, "input", e.what(), code);
    } catch (const DomainError& e) {
        code = kExitNumericalError;
        report = error_report(opts, "domain", e.what(), code);
    } catch (const NumericalError& e) {
        code = kExitNumericalError;
        report = error_report(opts, "numerical", e.what(), code);
    } catch (const Json::exception& e) {
        code = kExitInputError;
        report = error_report(opts, "input", e.what(), code);
    }
    if (report.contains("error")) {
        err << "error: " << report["error"]["message"].get<std::string>() << "\n";
    } else if (!opts.quiet) {
        std::ostringstream line;
        line << opts.command << ":";
        const Json& list = report.contains("verdicts") ? report["verdicts"] : report["checks"];
        int failed = 0;
        for (const auto& v : list) {
            failed += v.at("pass").get<bool>() ? 0 : 1;
        }
        line << " " << list.size() << (report.contains("verdicts") ? " verdicts, " : " checks, ") << failed << " failed, exit " << code;
        err << line.str() << "\n";
    }
    try {
        write_text(opts, out, report.dump(2) + "\n");
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return code;
}

}  // namespace tvckit
