#include <iostream>

#include <CLI11.hpp>

#include "tvckit/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Euler-equation and transversality-condition checks for higher-order stochastic models"};
    app.set_version_flag("--version", std::string(tvckit::kToolkitVersion));
    app.require_subcommand(1);

    tvckit::RunOptions opts;
    std::string out;
    std::string scenario;
    std::vector<double> eps_grid;
    std::uint64_t seed = 0;
    int tmax = 0;
    double tolerance = 0.0;
    std::string boundary;

    auto common = [&](CLI::App* sub, bool needs_scenario) {
        if (needs_scenario) {
            sub->add_option("--scenario", scenario, "Scenario JSON file")->required();
            sub->add_option("--tmax", tmax, "Override time.t_max (discrete scenarios)");
            sub->add_option("--eps-grid", eps_grid, "Override diagnostics.eps_grid (comma separated)")->delimiter(',');
            sub->add_option("--tolerance", tolerance, "Override the tolerance this command judges against");
            sub->add_option("--boundary", boundary, "truncated or fixed:<k>");
        }
        sub->add_option("--out", out, "Write the report here instead of stdout");
        sub->add_option("--format", opts.format, "json, or csv for the assume matrix")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--seed", seed, "Seed for sampled checks");
        sub->add_flag("--quiet", opts.quiet, "No summary line on stderr");
    };

    for (const char* name : {"euler", "tvc", "assume", "solve", "correspond"}) {
        common(app.add_subcommand(name, std::string("Run the ") + name + " checks on a scenario"), true);
    }
    CLI::App* demo = app.add_subcommand("demo", "Run a worked-example preset");
    demo->add_option("preset", opts.preset, "continuous-counterexample, discrete-counterexample, assumption, correspondence, household, all")
        ->required();
    common(demo, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tvckit::kExitInputError;
    }

    CLI::App* sub = app.get_subcommands().front();
    opts.command = sub->get_name();
    auto given = [&](const char* flag) { return sub->count(flag) > 0; };
    if (given("--out")) opts.out = out;
    if (given("--seed")) opts.seed = seed;
    if (opts.command != "demo") {
        opts.scenario = scenario;
        if (given("--tmax")) opts.tmax = tmax;
        if (given("--eps-grid")) opts.eps_grid = eps_grid;
        if (given("--tolerance")) opts.tolerance = tolerance;
        if (given("--boundary")) opts.boundary = boundary;
    }
    return tvckit::run(opts, std::cout, std::cerr);
}
