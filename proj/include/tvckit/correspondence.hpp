// Second-order discrete/continuous correspondence
// v(x, y, z, t, w) = V(x, x + y, x + 2y + z, t, w).
#pragma once

#include <array>
#include <vector>

#include "tvckit/objective.hpp"

namespace tvckit {

struct CorrespondencePair {
    DiscreteObjective V;
    ContinuousObjective v;
    bool symbolic = false;  // v built by substitution in the DSL rather than by the chain rule
};

/// v by composition; partials v1 = V1 + V2 + V3, v2 = V2 + 2 V3, v3 = V3.
/// Continuous times are rounded to the nearest integer for V.
CorrespondencePair discrete_to_continuous(const DiscreteObjective& V);

/// v by substituting y1 -> y0 + y1 and y2 -> y0 + 2 y1 + y2 in the DSL source,
/// with partials from symbolic differentiation of the result.
CorrespondencePair discrete_to_continuous(const DslModel& V);

/// Five consecutive discrete values y(t..t+4) in one state.
struct CorrespondenceSample {
    std::array<double, 5> y{};
    int t = 0;
    int omega = 0;
};

struct CorrespondenceReport {
    double partial_gap = 0.0;     // (a) v's partials against V-partial combinations
    double fd_gap = 0.0;          // (a) v's partials against central differences of v
    double euler_gap = 0.0;       // (b) discrete Euler row against its first-difference form
    double tolerance = 1e-10;     // for partial_gap and euler_gap
    double fd_tolerance = 1e-6;   // for fd_gap
    int checked = 0;
    int skipped = 0;  // samples touching -inf
    bool pass = false;
};

/// Gaps are |a - b| / max(1, |b|). Tolerance 1e-10 when both objectives carry
/// analytic partials, 1e-6 otherwise.
CorrespondenceReport correspondence_check(const CorrespondencePair& pair,
                                          const std::vector<CorrespondenceSample>& samples);

}  // namespace tvckit
