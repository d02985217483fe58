// Standard perturbation shapes: smooth ramps for continuous grids,
// step and window shapes for discrete index sets.
#pragma once

#include <vector>

#include "tvckit/core.hpp"

namespace tvckit {

/// Quintic smoothstep 6s^5 - 15s^4 + 10s^3, clamped to [0, 1] outside [0, 1].
/// Value, first and second derivatives vanish at 0; it reaches 1 with zero
/// first and second derivatives at 1.
double smoothstep5(double s);

/// Ramp used by the special-curve construction: level * smoothstep5(t / end).
struct RampSpec {
    double end = 1.0;
    // Number of leading derivatives (including the value) that vanish at t = 0.
    // The quintic realization supports up to 3.
    int vanishing_head = 2;
};

/// p(t, omega) = p_inf[omega] * smoothstep5(t / ramp.end); eventually constant from ramp.end.
PerturbationCurve ramp_curve(const TimeDomain& domain, const std::vector<double>& p_inf, RampSpec ramp = {});

/// Ramp up on [0, ramp.end], hold p_inf, ramp back down to zero on [down_start, support_end].
PerturbationCurve compact_ramp_curve(const TimeDomain& domain, const std::vector<double>& p_inf, double down_start,
                                     double support_end, RampSpec ramp = {});

/// level * smoothstep5(t / ramp.end) * path(t, omega). No level restriction;
/// see kamihigashi_curve for the checked (0, 1) version.
PerturbationCurve ramp_times_path(const StochasticPath& path, double level, RampSpec ramp = {});

/// Discrete q(t) = 0 for t < onset, q_inf[omega] for t >= onset.
PerturbationCurve step_curve(const TimeDomain& domain, const std::vector<double>& q_inf, int onset);

/// Discrete q(t) = value[omega] for start <= t <= last, zero elsewhere.
PerturbationCurve window_curve(const TimeDomain& domain, const std::vector<double>& value, int start, int last);

}  // namespace tvckit
