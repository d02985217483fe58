// Finite-horizon Euler-system solvers: damped Newton on the stationarity
// rows and an exhaustive grid search used as an oracle.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tvckit/core.hpp"
#include "tvckit/euler.hpp"
#include "tvckit/objective.hpp"

namespace tvckit {

/// Scalar-state finite-horizon problem on indices 0..T+n.
///
/// truncated: unknowns y(0..T), rows t = 0..T; y(T+1..T+n) comes from
/// `tail` when given, else from the guess.
/// fixed_initial(k): y(0..k-1) = head, y(T+1..T+n) = tail, unknowns y(k..T).
struct SolveSpec {
    int horizon = 20;
    BoundaryMode mode;
    std::vector<std::vector<double>> head;  // [omega][k]
    std::vector<std::vector<double>> tail;  // [omega][n]
    std::optional<StochasticPath> guess;    // default: zeros (truncated) or head-to-tail interpolation
    double tolerance = 1e-10;
    int max_iterations = 100;
};

struct SolveResult {
    StochasticPath path;
    int iterations = 0;  // max over states
    double max_residual = 0.0;
    std::vector<double> residual_history;  // max-abs residual before each iteration, worst state
    // Curvature of the solved rows per state: "max", "min", "saddle" or "degenerate".
    std::vector<std::string> stationarity;
};

/// Throws NumericalError on a singular Jacobian, a failed line search or the
/// iteration cap; InputError when the guess lies outside the objective's domain.
SolveResult newton_euler_solve(const DiscreteObjective& obj, const SolveSpec& spec, const SampleSpace& space);

struct BruteForceSpec {
    StochasticPath base;                    // supplies every fixed entry
    std::vector<int> free_times;            // indices varied in every state
    std::vector<std::vector<double>> grid;  // candidate values per free index
    int objective_horizon = 0;              // maximize sum_{j=0}^{horizon} E V(j)
};

struct BruteForceResult {
    StochasticPath path;
    double value = 0.0;
    long long evaluated = 0;  // every combination tried
    long long skipped = 0;  // combinations with a -inf term
};

/// Exhaustive search, state by state. At most 6 free variables per state and
/// 1e7 combinations.
BruteForceResult brute_force_solve(const DiscreteObjective& obj, const SampleSpace& space, const BruteForceSpec& spec);

/// sum_{j=0}^{horizon} E V(window(path, j), j); -inf when any term is.
double truncated_value(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                       int horizon);

}  // namespace tvckit
