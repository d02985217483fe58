// Numerical diagnosis of the uniform-convergence and domination assumptions:
// the A(T', eps) grid, iterated limits, the uniformity verdict and an
// empirical domination bound.
#pragma once

#include <string>
#include <vector>

#include "tvckit/core.hpp"
#include "tvckit/objective.hpp"

namespace tvckit {

enum class CellStatus { finite, diverging, domain_error };

std::string to_string(CellStatus s);

/// A(T', eps): rows follow tprime_grid, columns follow eps_grid.
/// Flagged cells hold NaN.
struct DiagnosticMatrix {
    TimeKind kind = TimeKind::discrete;
    std::vector<double> eps_grid;     // strictly decreasing
    std::vector<double> tprime_grid;  // strictly increasing
    std::vector<std::vector<double>> values;
    std::vector<std::vector<CellStatus>> status;

    int rows() const noexcept { return static_cast<int>(tprime_grid.size()); }
    int cols() const noexcept { return static_cast<int>(eps_grid.size()); }
    int flagged() const;
};

/// Geometric grid from `first` to `last` with `count` points (both ends included).
std::vector<double> geometric_grid(double first, double last, int count);
/// Strictly increasing integer horizons, roughly geometric from `first` to `last`.
std::vector<double> geometric_horizons(int first, int last, int count);

/// Discrete: A = sum_{t=0}^{T'} E[V(y + eps q, t) - V(y, t)] / eps.
DiagnosticMatrix a_grid(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                        const PerturbationCurve& curve, std::vector<double> eps_grid,
                        std::vector<double> tprime_grid);
/// Continuous: A = int_0^{T'} E[v(jet(x + eps p)) - v(jet(x))] / eps dt (trapezoid).
DiagnosticMatrix a_grid(const ContinuousObjective& obj, const SampleSpace& space, const StochasticPath& path,
                        const PerturbationCurve& curve, std::vector<double> eps_grid,
                        std::vector<double> tprime_grid);

/// Rows T', columns eps, header row of eps values.
std::string matrix_csv(const DiagnosticMatrix& m);

struct LimitEstimate {
    bool diverges = false;
    bool inconclusive = false;
    double value = 0.0;
    double error = 0.0;
};

std::string describe(const LimitEstimate& e);

/// Least-squares line through the trailing points of a sequence.
struct GrowthFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    int points = 0;
    bool growth = false;  // slope > 10 * standard error and above the noise floor
};

GrowthFit fit_growth(const std::vector<double>& x, const std::vector<double>& y);

/// Limit of a sequence along increasing x: DIVERGES on detected growth,
/// otherwise the last value when the last three agree within 1e-6 relative.
LimitEstimate limit_along(const std::vector<double>& x, const std::vector<double>& y, GrowthFit* fit = nullptr);

/// Richardson extrapolation to eps = 0 from the two smallest eps values;
/// the error compares against the next pair.
LimitEstimate limit_eps_zero(const std::vector<double>& eps, const std::vector<double>& y);

struct IteratedLimits {
    bool sufficient = false;  // >= 4 points per axis
    LimitEstimate eps_then_T;  // lim_eps lim_T' A
    LimitEstimate T_then_eps;  // lim_T' lim_eps A
    std::vector<LimitEstimate> along_T;    // per eps column
    std::vector<GrowthFit> growth;         // per eps column
    std::vector<LimitEstimate> along_eps;  // per T' row
};

IteratedLimits iterated_limits(const DiagnosticMatrix& m);

enum class Uniformity { uniform, non_uniform, inconclusive };

std::string to_string(Uniformity u);

struct UniformityVerdict {
    Uniformity verdict = Uniformity::inconclusive;
    IteratedLimits limits;
    double limit_gap = 0.0;
    double max_growth_slope = 0.0;
    std::vector<double> deviation_profile;  // sup_eps |A(T', eps) - A(T'_max, eps)| per row
    double tolerance = 1e-6;
    std::string reason;
};

UniformityVerdict uniformity_verdict(const DiagnosticMatrix& m, double tolerance = 1e-6);

struct DominationCell {
    double t = 0.0;
    int omega = 0;
    double sup = 0.0;  // sup over the eps grid of |m_t(eps, omega)|
    double sup_eps = 0.0;
    bool growth = false;
    bool domain_error = false;
};

struct DominationReport {
    double eps_bar = 0.0;
    std::vector<double> eps_grid;  // eps_bar / 2^k
    std::vector<DominationCell> cells;
    double bound = 0.0;  // candidate envelope: max sup over unflagged cells
    int flagged = 0;
    bool bounded = false;
};

/// m_t(eps, w) = (V(y + eps q, t) - V(y, t)) / eps over a halving eps grid.
DominationReport domination_check(const DiscreteObjective& obj, const StochasticPath& path,
                                  const PerturbationCurve& curve, double eps_bar, const std::vector<int>& times,
                                  int levels = 12);
/// Same with v along the jets of x and x + eps p.
DominationReport domination_check(const ContinuousObjective& obj, const StochasticPath& path,
                                  const PerturbationCurve& curve, double eps_bar, const std::vector<double>& times,
                                  int levels = 12);

}  // namespace tvckit
