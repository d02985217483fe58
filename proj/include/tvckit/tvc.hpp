// Transversality terms: the discrete tail, the continuous boundary bracket,
// liminf/limsup estimation over truncation horizons, the ramp-times-optimum
// curve, and the first-variation decomposition used as a cross-check.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "tvckit/core.hpp"
#include "tvckit/curves.hpp"
#include "tvckit/objective.hpp"

namespace tvckit {

/// Per-state tail at horizon T':
/// sum_i sum_{k=1}^{n} sum_{j=T'-n+k}^{T'} dV(j)/dslot(T'+k-j) * q_i(T'+k).
/// Needs n-1 <= T' and T'+n <= T_max.
RandomScalar discrete_tvc_tail_omega(const DiscreteObjective& obj, const StochasticPath& path,
                                     const PerturbationCurve& q, int tprime);
double discrete_tvc_tail(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                         const PerturbationCurve& q, int tprime);

struct TvcReport {
    std::vector<double> times;        // T' (discrete) or T (continuous)
    std::vector<double> values;       // expected tail / bracket difference
    std::vector<double> running_inf;  // inf over the sequence from position k onwards
    std::vector<double> running_sup;
    int window = 5;  // samples behind the liminf/limsup estimates
    double liminf_estimate = 0.0;
    double limsup_estimate = 0.0;
    double tolerance = 1e-8;
    bool satisfied = false;     // liminf <= tolerance
    bool limsup_holds = false;  // limsup >= -tolerance
    bool equals_zero = false;   // both estimates within tolerance of zero
    bool finite_horizon = true; // estimates come from a truncated sequence
};

/// Fills running inf/sup, estimates and verdicts from a value sequence.
TvcReport summarize_tvc(std::vector<double> times, std::vector<double> values, double tolerance);

/// Tails for T' from max(n-1, first) to T_max - n. Default tolerance 1e-8 with
/// analytic partials, 1e-4 otherwise.
TvcReport tvc_liminf_discrete(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                              const PerturbationCurve& q, std::optional<int> first = {},
                              std::optional<double> tolerance = {});

/// Per-state bracket sum_{r<n} p^(r)(t) sum_{k=r+1}^{n} (-1)^{k-r-1} D^{k-r-1} v_{k+1}(t).
/// Derivatives p^(r)(0) with r below the curve's vanishing head are taken as 0.
class ContinuousBracket {
public:
    ContinuousBracket(const ContinuousObjective& obj, const StochasticPath& path, const PerturbationCurve& p);

    double at(int index, int omega) const;
    RandomScalar at_time(double t) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

double continuous_boundary_term(const ContinuousObjective& obj, const SampleSpace& space, const StochasticPath& path,
                                const PerturbationCurve& p, double t);

/// Sequence bracket(T) - bracket(0) over `horizons` (default: the integer
/// times 1..floor(t_end)). Default tolerance 1e-4.
TvcReport tvc_liminf_continuous(const ContinuousObjective& obj, const SampleSpace& space, const StochasticPath& path,
                                const PerturbationCurve& p, std::vector<double> horizons = {},
                                std::optional<double> tolerance = {});

/// p(t, w) = level * smoothstep5(t / ramp.end) * path(t, w), with 0 < level < 1.
PerturbationCurve kamihigashi_curve(const StochasticPath& path, double level, RampSpec ramp = {});

struct DecompositionCheck {
    double direct = 0.0;    // central eps-difference of the truncated expected objective
    double boundary = 0.0;  // Euler rows t < n, weighted by q
    double interior = 0.0;  // Euler rows n <= t <= T', weighted by q
    double tail = 0.0;      // transversality tail at T'
    double discrepancy = 0.0;
};

/// Discrete: F(eps) = sum_{j=0}^{T'} E V(path + eps q, j) against
/// sum_{t<=T'} E[residual(t) q(t)] + tail(T').
DecompositionCheck variation_decomposition_check(const DiscreteObjective& obj, const SampleSpace& space,
                                                 const StochasticPath& path, const PerturbationCurve& q, int tprime,
                                                 double eps = 1e-6);

/// Continuous: G(eps) = int_0^{T'} E v(jet(x + eps p)) dt against
/// int_0^{T'} E[residual p] dt + bracket(T') - bracket(0). Carries O(h^2) error.
DecompositionCheck variation_decomposition_check(const ContinuousObjective& obj, const SampleSpace& space,
                                                 const StochasticPath& path, const PerturbationCurve& p,
                                                 double tprime, double eps = 1e-6);

}  // namespace tvckit
