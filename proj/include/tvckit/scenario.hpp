// Scenario files: JSON description of a model, a candidate path, a
// perturbation and the settings of every command. Unknown keys are rejected.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvckit/core.hpp"
#include "tvckit/euler.hpp"
#include "tvckit/objective.hpp"
#include "tvckit/solver.hpp"

namespace tvckit {

using Json = nlohmann::ordered_json;

struct ObjectiveSpec {
    std::string builtin;  // empty for a DSL objective
    QuadLinParams quadlin;
    double discount = 0.9;
    int lags = 2;
    std::string expr;
    std::map<std::string, std::vector<double>> constants;
};

struct PathSpec {
    std::string kind = "closed-form";  // closed-form | constant | values | solve
    std::string name;                  // closed-form name
    std::vector<double> value;         // constant, per state
    std::vector<std::vector<double>> values;  // [t][omega]
};

struct PerturbationSpec {
    // zero | eventually-constant | compact-support | ramp | compact-ramp | kamihigashi | values
    std::string kind = "zero";
    std::vector<double> value;  // per state
    int onset = 1;
    int start = 1;
    int last = 10;
    double end = 1.0;
    double down_start = 0.0;
    double support_end = 0.0;
    double level = 0.5;
    int vanishing_head = 2;
    std::vector<std::vector<double>> values;  // [t][omega]
};

struct DiagnosticsSpec {
    std::vector<double> eps_grid;
    std::vector<double> tprime_grid;
    double eps_bar = 0.1;
    std::vector<double> sample_times;
    int levels = 12;
    bool assert_uniform = false;
};

struct TolerancesSpec {
    double euler = 1e-8;
    double tvc = 1e-8;
    double gradient = 1e-6;
    double uniformity = 1e-6;
    double correspondence = 1e-10;
};

struct BruteForceSettings {
    std::vector<int> free;
    double min = 0.0;
    double max = 1.0;
    int points = 21;
};

struct SolveSettings {
    BoundaryMode mode;
    std::vector<std::vector<double>> head;
    std::vector<std::vector<double>> tail;
    std::string guess = "zero";  // zero | interpolate
    double tolerance = 1e-10;
    int max_iterations = 100;
    std::optional<BruteForceSettings> brute_force;
};

struct CorrespondenceSettings {
    int samples = 100;
    double min = 0.5;
    double max = 2.0;
};

struct Scenario {
    std::string name;
    TimeDomain time = TimeDomain::discrete(0);
    SampleSpace omega{{1.0}};
    int order = 0;
    ObjectiveSpec objective;
    PathSpec path;
    PerturbationSpec perturbation;
    BoundaryMode boundary;
    DiagnosticsSpec diagnostics;
    TolerancesSpec tolerances;
    std::optional<SolveSettings> solve;
    CorrespondenceSettings correspondence;
    std::uint64_t seed = 12345;
    std::vector<std::string> warnings;  // load-time gradient-check findings

    bool discrete() const { return time.is_discrete(); }
};

Scenario scenario_from_json(const Json& j);
Scenario load_scenario(const std::filesystem::path& file);
Json read_json_file(const std::filesystem::path& file);

/// Normalized scenario with every default spelled out; reparses to the same scenario.
Json scenario_to_json(const Scenario& s);

// Builders. Discrete/continuous variants throw UnsupportedError on a time-kind mismatch.
DiscreteObjective build_discrete(const Scenario& s);
ContinuousObjective build_continuous(const Scenario& s);
std::optional<DslModel> build_dsl(const Scenario& s);
SolveSpec build_solve_spec(const Scenario& s);
StochasticPath build_path(const Scenario& s);
PerturbationCurve build_curve(const Scenario& s, const StochasticPath& path);

}  // namespace tvckit
