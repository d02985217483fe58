#include <algorithm>
#include <cmath>

#include "tvckit/objective.hpp"

namespace tvckit {

template <typename Time>
double fd_partial(const ReducedObjective<Time>& obj, int slot, int comp, const Slots& at, Time t, int omega) {
    if (slot < 0 || slot > obj.order() || comp < 0 || comp >= obj.dim()) {
        throw InputError("slot/component index out of range");
    }
    const double f0 = obj.eval(at, t, omega);
    if (f0 == kNegInf) {
        throw DomainError("objective '" + obj.name() + "' is -inf at the evaluation point");
    }
    const double x = at(slot, comp);
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    Slots up = at;
    Slots down = at;
    up(slot, comp) = x + h;
    down(slot, comp) = x - h;
    const double fp = obj.eval(up, t, omega);
    const double fm = obj.eval(down, t, omega);
    const double hp = up(slot, comp) - x;  // representable step
    const double hm = x - down(slot, comp);
    if (fp != kNegInf && fm != kNegInf) {
        return (fp - fm) / (hp + hm);
    }
    if (fp != kNegInf) {
        return (fp - f0) / hp;
    }
    if (fm != kNegInf) {
        return (f0 - fm) / hm;
    }
    throw DomainError("objective '" + obj.name() + "' is -inf on both sides of the evaluation point");
}

template <typename Time>
double partial_slot(const ReducedObjective<Time>& obj, int slot, int comp, const Slots& at, Time t, int omega) {
    if (!obj.has_partials()) {
        return fd_partial(obj, slot, comp, at, t, omega);
    }
    if (slot < 0 || slot > obj.order() || comp < 0 || comp >= obj.dim()) {
        throw InputError("slot/component index out of range");
    }
    if (obj.eval(at, t, omega) == kNegInf) {
        throw DomainError("objective '" + obj.name() + "' is -inf at the evaluation point");
    }
    return obj.analytic_partial(at, t, omega, slot, comp);
}

template <typename Time>
GradientCheckReport gradient_check(const ReducedObjective<Time>& obj, const std::vector<PointSample<Time>>& samples,
                                   double tolerance) {
    if (!obj.has_partials()) {
        throw UnsupportedError("gradient check needs analytic partials");
    }
    GradientCheckReport report;
    report.tolerance = tolerance;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const auto& sample = samples[s];
        if (obj.eval(sample.slots, sample.t, sample.omega) == kNegInf) {
            ++report.skipped;
            continue;
        }
        ++report.checked;
        for (int k = 0; k <= obj.order(); ++k) {
            for (int i = 0; i < obj.dim(); ++i) {
                const double a = obj.analytic_partial(sample.slots, sample.t, sample.omega, k, i);
                double fd = 0.0;
                try {
                    fd = fd_partial(obj, k, i, sample.slots, sample.t, sample.omega);
                } catch (const DomainError&) {
                    continue;
                }
                const double gap = std::abs(a - fd) / std::max(1.0, std::abs(a));
                if (!(gap <= report.max_gap)) {
                    report.max_gap = gap;
                    report.worst_sample = static_cast<int>(s);
                    report.worst_slot = k;
                }
            }
        }
    }
    report.inconclusive = report.checked == 0;
    report.pass = !report.inconclusive && report.max_gap <= tolerance;
    return report;
}

template double fd_partial(const DiscreteObjective&, int, int, const Slots&, int, int);
template double fd_partial(const ContinuousObjective&, int, int, const Slots&, double, int);
template double partial_slot(const DiscreteObjective&, int, int, const Slots&, int, int);
template double partial_slot(const ContinuousObjective&, int, int, const Slots&, double, int);
template GradientCheckReport gradient_check(const DiscreteObjective&, const std::vector<PointSample<int>>&, double);
template GradientCheckReport gradient_check(const ContinuousObjective&, const std::vector<PointSample<double>>&,
                                            double);

}  // namespace tvckit
