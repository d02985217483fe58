// Command dispatch and report emission for the tvckit executable.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tvckit/scenario.hpp"

namespace tvckit {

inline constexpr const char* kToolkitVersion = "1.0.0";

// Exit codes of run().
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFailed = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericalError = 3;

struct RunOptions {
    std::string command;  // euler | tvc | assume | solve | correspond | demo
    std::optional<std::filesystem::path> scenario;
    std::string preset;  // demo only
    std::optional<std::filesystem::path> out;
    std::string format = "json";  // json | csv (csv: assume matrix only)
    std::optional<int> tmax;
    std::optional<std::vector<double>> eps_grid;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    std::optional<std::string> boundary;
    bool quiet = false;
};

/// Rewrites the raw scenario JSON with command-line overrides. The tolerance
/// override goes to the setting the command judges against.
void apply_overrides(Json& scenario, const RunOptions& opts);

/// Report for one scenario-driven command. Fields: command, toolkit_version,
/// seed, scenario (normalized echo), results, verdicts, caveats, exit_code.
/// Throws the library's exceptions on input or numerical failure.
Json command_report(const std::string& command, const Scenario& s);

/// Exit code implied by a report's verdict list.
int verdict_exit_code(const Json& verdicts);

/// Full pipeline: load, override, dispatch, write the report to opts.out (or
/// `out`). Errors are reported on `err` and as an error report; returns the exit code.
int run(const RunOptions& opts, std::ostream& out, std::ostream& err);

// Demo presets reproducing the worked examples.
std::vector<std::string> demo_presets();  // without "all"
/// Embedded scenario(s) a preset runs on.
std::vector<Json> demo_scenarios(const std::string& preset);
/// Report with a checks list [{name, expected, observed, tolerance, pass}];
/// exit_code 0 iff every check passes.
Json demo_report(const std::string& preset, std::uint64_t seed);

}  // namespace tvckit
