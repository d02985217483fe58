// Euler-equation residuals: the discrete triangular system and the
// continuous alternating-derivative form.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tvckit/core.hpp"
#include "tvckit/objective.hpp"

namespace tvckit {

/// truncated imposes the Euler rows from t = 0 with truncated sums;
/// fixed_initial(k) treats y(0..k-1) as given data with no Euler row.
struct BoundaryMode {
    enum class Kind { truncated, fixed_initial };
    Kind kind = Kind::truncated;
    int k = 0;

    static BoundaryMode truncated() { return {}; }
    static BoundaryMode fixed_initial(int k);

    // "truncated" or "fixed:<k>".
    static BoundaryMode parse(std::string_view text);
    std::string to_string() const;
    int first_row() const noexcept { return kind == Kind::fixed_initial ? k : 0; }

    bool operator==(const BoundaryMode&) const = default;
};

/// Euler row at index t for one state and component:
/// sum_{j=max(0,t-n)}^{min(t, T_max-n)} dV(window(j), j)/dslot(t-j).
double discrete_euler_residual_at(const DiscreteObjective& obj, const StochasticPath& path, int t, int omega,
                                  int comp = 0);

/// Residual at t for every state. Throws HorizonError when T_max < n or t is
/// outside [mode.first_row(), T_max - n].
RandomScalar discrete_euler_residual(const DiscreteObjective& obj, const StochasticPath& path, int t,
                                     BoundaryMode mode = {}, int comp = 0);

/// Sampled slot-partial series s_k(t, w) = v_{k+1}(jet(t), t, w) along a
/// continuous path, with their time derivatives D^m s_k for m <= k.
class ContinuousTerms {
public:
    ContinuousTerms(const ContinuousObjective& obj, const StochasticPath& path, int comp = 0);

    int order() const noexcept { return order_; }
    const StochasticPath& path() const noexcept { return jets_.front(); }
    // r-th time derivative of the path (r = 0 is the path itself).
    const StochasticPath& jet(int r) const { return jets_.at(static_cast<std::size_t>(r)); }
    Slots jet_at(int index, int omega) const;
    // D^m s_k; m ranges over 0..k.
    const StochasticPath& slot_derivative(int k, int m) const;

    // sum_k (-1)^k D^k s_k at a grid index.
    double euler_at(int index, int omega) const;

private:
    int order_;
    std::vector<StochasticPath> jets_;
    std::vector<std::vector<StochasticPath>> series_;
};

/// Continuous Euler residual at grid time t; t must lie at least n*h from both ends.
RandomScalar continuous_euler_residual(const ContinuousObjective& obj, const StochasticPath& path, double t,
                                       int comp = 0);

struct EulerReport {
    std::string mode;            // boundary mode, or "continuous"
    std::vector<double> times;   // admissible rows
    std::vector<std::vector<double>> residuals;  // [row][omega]
    std::vector<double> expected;                // E residual per row
    double max_abs = 0.0;
    double tolerance = 1e-8;
    bool analytic_partials = true;
    bool stationary = false;
    int worst_row = -1;
};

/// Default tolerance: 1e-8 with analytic partials on discrete grids, 1e-4 otherwise.
EulerReport euler_report(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                         BoundaryMode mode = {}, std::optional<double> tolerance = {});
EulerReport euler_report(const ContinuousObjective& obj, const SampleSpace& space, const StochasticPath& path,
                         std::optional<double> tolerance = {});

}  // namespace tvckit
