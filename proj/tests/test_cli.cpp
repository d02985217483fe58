#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "tvckit/cli.hpp"

using namespace tvckit;

namespace {

const std::filesystem::path kDir = TVCKIT_SCENARIO_DIR;

Json fixture(const std::string& name) { return read_json_file(kDir / name); }

struct Outcome {
    int code;
    Json report;
    std::string text;
};

Outcome run_command(RunOptions opts) {
    opts.quiet = true;
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(opts, out, err);
    Outcome o{code, Json(), out.str()};
    if (opts.format == "json") {
        o.report = Json::parse(out.str());
    }
    return o;
}

RunOptions with_scenario(const std::string& command, const std::string& file) {
    RunOptions o;
    o.command = command;
    o.scenario = kDir / file;
    return o;
}

std::string error_key(const Json& j) {
    try {
        scenario_from_json(j);
    } catch (const ScenarioError& e) {
        return e.key_path();
    }
    return "";
}

}  // namespace

TEST(Scenario, ShippedFixtureLoads) {
    const Scenario s = load_scenario(kDir / "quadlin-counterexample.json");
    EXPECT_EQ(s.time.t_max(), 50);
    EXPECT_EQ(s.order, 2);
    EXPECT_EQ(s.perturbation.kind, "eventually-constant");
    EXPECT_TRUE(s.warnings.empty());
    EXPECT_EQ(s.diagnostics.eps_grid.size(), 6u);
}

TEST(Scenario, AllFixturesLoadWithoutGradientWarnings) {
    for (const auto& entry : std::filesystem::directory_iterator(kDir)) {
        const Scenario s = load_scenario(entry.path());
        EXPECT_TRUE(s.warnings.empty()) << entry.path();
    }
}

TEST(Scenario, ProbabilitySumErrorNamesKey) {
    Json j = fixture("quadlin-counterexample.json");
    j["omega"]["probs"] = {0.5, 0.4};
    EXPECT_EQ(error_key(j), "omega.probs");
}

TEST(Scenario, UnknownKeysRejected) {
    Json j = fixture("quadlin-counterexample.json");
    j["colour"] = "blue";
    EXPECT_EQ(error_key(j), "colour");
    Json k = fixture("quadlin-counterexample.json");
    k["time"]["h"] = 0.1;
    EXPECT_EQ(error_key(k), "time.h");
    Json l = fixture("quadlin-counterexample.json");
    l["perturbation"]["level"] = 0.5;
    EXPECT_EQ(error_key(l), "perturbation.level");
}

TEST(Scenario, UndeclaredIdentifierNamed) {
    Json j = fixture("dsl-quadratic.json");
    j["objective"]["expr"] = "(y0 - a)^2 + delta*y1";
    try {
        scenario_from_json(j);
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_EQ(e.key_path(), "objective.expr");
        EXPECT_NE(std::string(e.what()).find("'delta'"), std::string::npos);
    }
}

TEST(Scenario, ConsistencyChecks) {
    Json j = fixture("quadlin-counterexample.json");
    j["order"] = 3;
    EXPECT_EQ(error_key(j), "order");
    Json k = fixture("quadlin-counterexample.json");
    k["objective"]["params"]["alpha"] = {1.0};
    EXPECT_EQ(error_key(k), "objective.params.alpha");
    Json l = fixture("quadlin-counterexample.json");
    l["diagnostics"]["eps_grid"] = {1e-3, 1e-2};
    EXPECT_EQ(error_key(l), "diagnostics.eps_grid");
    Json m = fixture("continuous-counterexample.json");
    m["objective"]["builtin"] = "quadlin-discrete";
    EXPECT_EQ(error_key(m), "objective.builtin");
}

TEST(Scenario, InconclusiveGradientCheckBecomesWarning) {
    // Sample slots lie in [0.5, 2], so ln(y0 - 5) is -inf at every sample point.
    Json j = fixture("dsl-log.json");
    j["objective"]["expr"] = "exp(t*ln(d)) * ln(y0 - 5 + 0*y1*y2)";
    const Scenario s = scenario_from_json(j);
    ASSERT_EQ(s.warnings.size(), 1u);
    EXPECT_NE(s.warnings[0].find("inconclusive"), std::string::npos);
}

TEST(Scenario, EchoRoundTrips) {
    for (const auto& entry : std::filesystem::directory_iterator(kDir)) {
        const Scenario s = load_scenario(entry.path());
        const Json echo = scenario_to_json(s);
        const Json again = scenario_to_json(scenario_from_json(Json::parse(echo.dump())));
        EXPECT_EQ(echo.dump(), again.dump()) << entry.path();
    }
}

TEST(Run, TvcCounterexampleExitsOne) {
    const auto o = run_command(with_scenario("tvc", "quadlin-counterexample.json"));
    EXPECT_EQ(o.code, kExitVerdictFailed);
    EXPECT_NEAR(o.report["results"]["liminf_estimate"].get<double>(), 0.9, 1e-10);
    EXPECT_EQ(o.report["verdicts"][0]["verdict"], "VIOLATED");
    EXPECT_EQ(o.report["verdicts"][0]["tolerance"], 1e-8);
    EXPECT_EQ(o.report["scenario"]["time"]["t_max"], 50);
}

TEST(Run, EulerClosedFormExitsZero) {
    const auto o = run_command(with_scenario("euler", "quadlin-counterexample.json"));
    EXPECT_EQ(o.code, kExitPass);
    EXPECT_EQ(o.report["verdicts"][0]["verdict"], "STATIONARY");
}

TEST(Run, EveryVerdictNamesItsTolerance) {
    for (const char* cmd : {"euler", "tvc", "assume"}) {
        const auto o = run_command(with_scenario(cmd, "quadlin-compact.json"));
        for (const auto& v : o.report["verdicts"]) {
            EXPECT_TRUE(v.contains("tolerance")) << cmd;
            EXPECT_TRUE(v["tolerance"].is_number()) << cmd;
        }
    }
}

TEST(Run, ReportEchoReproducesRun) {
    const auto first = run_command(with_scenario("tvc", "quadlin-compact.json"));
    const std::filesystem::path tmp = std::filesystem::temp_directory_path() / "tvckit-echo.json";
    std::ofstream(tmp) << first.report["scenario"].dump(2);
    RunOptions again;
    again.command = "tvc";
    again.scenario = tmp;
    const auto second = run_command(again);
    EXPECT_EQ(first.text, second.text);
    std::filesystem::remove(tmp);
}

TEST(Run, AssertedNonUniformExitsOne) {
    const std::filesystem::path tmp = std::filesystem::temp_directory_path() / "tvckit-assert.json";
    Json j = fixture("quadlin-counterexample.json");
    j["diagnostics"] = {{"assert_uniform", true}};
    std::ofstream(tmp) << j.dump();
    RunOptions o;
    o.command = "assume";
    o.scenario = tmp;
    const auto res = run_command(o);
    EXPECT_EQ(res.code, kExitVerdictFailed);
    EXPECT_EQ(res.report["results"]["uniformity"]["verdict"], "NON_UNIFORM");
    std::filesystem::remove(tmp);
    const auto plain = run_command(with_scenario("assume", "quadlin-counterexample.json"));
    EXPECT_EQ(plain.code, kExitPass);
}

TEST(Run, InputErrorsExitTwo) {
    RunOptions missing;
    missing.command = "euler";
    missing.scenario = kDir / "does-not-exist.json";
    EXPECT_EQ(run_command(missing).code, kExitInputError);
    auto wrong = with_scenario("correspond", "continuous-counterexample.json");
    EXPECT_EQ(run_command(wrong).code, kExitInputError);
    RunOptions demo;
    demo.command = "demo";
    demo.preset = "nonexistent";
    EXPECT_EQ(run_command(demo).code, kExitInputError);
}

TEST(Run, DomainErrorsExitThree) {
    const std::filesystem::path tmp = std::filesystem::temp_directory_path() / "tvckit-domain.json";
    Json j = fixture("household.json");
    j["path"] = {{"kind", "constant"}, {"value", {-1.0, -1.0}}};
    j.erase("solve");
    std::ofstream(tmp) << j.dump();
    RunOptions o;
    o.command = "euler";
    o.scenario = tmp;
    const auto res = run_command(o);
    EXPECT_EQ(res.code, kExitNumericalError);
    EXPECT_EQ(res.report["error"]["kind"], "domain");
    std::filesystem::remove(tmp);
}

TEST(Run, Overrides) {
    auto o = with_scenario("tvc", "quadlin-counterexample.json");
    o.tmax = 30;
    o.seed = 7;
    o.tolerance = 1.0;
    const auto res = run_command(o);
    EXPECT_EQ(res.report["scenario"]["time"]["t_max"], 30);
    EXPECT_EQ(res.report["seed"], 7);
    EXPECT_EQ(res.code, kExitPass);  // 0.9 <= 1.0
    auto b = with_scenario("euler", "quadlin-counterexample.json");
    b.boundary = "fixed:2";
    EXPECT_EQ(run_command(b).report["results"]["mode"], "fixed:2");
    auto e = with_scenario("assume", "quadlin-counterexample.json");
    e.eps_grid = std::vector<double>{0.1, 0.01, 0.001, 0.0001};
    EXPECT_EQ(run_command(e).report["results"]["matrix"]["eps_grid"].size(), 4u);
}

TEST(Run, CsvMatrix) {
    auto o = with_scenario("assume", "quadlin-counterexample.json");
    o.format = "csv";
    const auto res = run_command(o);
    EXPECT_EQ(res.code, kExitPass);
    EXPECT_EQ(res.text.substr(0, res.text.find('\n')), "tprime,0.1,0.01,0.001,1e-04,1e-05,1e-06");
    auto bad = with_scenario("euler", "quadlin-counterexample.json");
    bad.format = "csv";
    EXPECT_EQ(run_command(bad).code, kExitInputError);
}

TEST(Run, SolveWithBruteForce) {
    const auto res = run_command(with_scenario("solve", "household-brute-force.json"));
    EXPECT_EQ(res.code, kExitPass);
    EXPECT_LE(res.report["results"]["brute_force"]["max_distance"].get<double>(), 0.05);
}

TEST(Run, CorrespondDsl) {
    const auto res = run_command(with_scenario("correspond", "dsl-quadratic.json"));
    EXPECT_EQ(res.code, kExitPass);
    EXPECT_TRUE(res.report["results"].contains("symbolic"));
}

TEST(Demo, PresetsPassAndAreDeterministic) {
    for (const auto& preset : demo_presets()) {
        RunOptions o;
        o.command = "demo";
        o.preset = preset;
        const auto a = run_command(o);
        const auto b = run_command(o);
        EXPECT_EQ(a.code, kExitPass) << preset;
        EXPECT_EQ(a.text, b.text) << preset;
        EXPECT_FALSE(a.report["checks"].empty()) << preset;
    }
}

TEST(Demo, EmbeddedPresetsMatchShippedFixtures) {
    std::map<std::string, Json> shipped;
    for (const auto& entry : std::filesystem::directory_iterator(kDir)) {
        const Json j = read_json_file(entry.path());
        shipped[j["name"].get<std::string>()] = j;
    }
    for (const auto& preset : demo_presets()) {
        for (const auto& j : demo_scenarios(preset)) {
            const std::string name = j["name"].get<std::string>();
            ASSERT_TRUE(shipped.count(name)) << name;
            EXPECT_EQ(shipped[name], j) << name;
        }
    }
}
