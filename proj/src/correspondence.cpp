#include <algorithm>
#include <cmath>

#include "tvckit/correspondence.hpp"

namespace tvckit {

namespace {

Slots window_from_jet(const Slots& jet) {
    const double x = jet(0);
    const double y = jet(1);
    const double z = jet(2);
    return Slots(2, 1, {x, x + y, x + 2.0 * y + z});
}

int discrete_time(double t) { return static_cast<int>(std::lround(t)); }

void require_order2(int order) {
    if (order != 2) {
        throw UnsupportedError("the correspondence is defined for order 2 only, got order " + std::to_string(order));
    }
}

}  // namespace

CorrespondencePair discrete_to_continuous(const DiscreteObjective& V) {
    require_order2(V.order());
    if (V.dim() != 1) {
        throw UnsupportedError("the correspondence is implemented for scalar states");
    }
    auto eval = [V](const Slots& jet, double t, int w) { return V.eval(window_from_jet(jet), discrete_time(t), w); };
    auto partial = [V](const Slots& jet, double t, int w, int slot, int) {
        const Slots win = window_from_jet(jet);
        const int td = discrete_time(t);
        const double v3 = partial_slot(V, 2, 0, win, td, w);
        if (slot == 2) {
            return v3;
        }
        const double v2 = partial_slot(V, 1, 0, win, td, w);
        if (slot == 1) {
            return v2 + 2.0 * v3;
        }
        return partial_slot(V, 0, 0, win, td, w) + v2 + v3;
    };
    ContinuousObjective v("induced:" + V.name(), 2, 1, eval, partial, V.states());
    return {V, std::move(v), false};
}

CorrespondencePair discrete_to_continuous(const DslModel& V) {
    require_order2(V.order());
    using namespace expr;
    const NodePtr y0 = variable(0);
    const NodePtr y1 = variable(1);
    const NodePtr y2 = variable(2);
    std::vector<NodePtr> repl(3);
    repl[1] = binary(NodeKind::add, y0, y1);
    repl[2] = binary(NodeKind::add, binary(NodeKind::add, y0, binary(NodeKind::mul, constant(2.0), y1)), y2);
    const Expr induced = substitute(V.expression(), repl);
    const DslModel model(to_string(induced), 2, V.constants());
    return {V.discrete(), model.continuous(), true};
}

CorrespondenceReport correspondence_check(const CorrespondencePair& pair,
                                          const std::vector<CorrespondenceSample>& samples) {
    const DiscreteObjective& V = pair.V;
    const ContinuousObjective& v = pair.v;
    require_order2(V.order());
    require_order2(v.order());
    CorrespondenceReport report;
    if (!(V.has_partials() && v.has_partials())) {
        report.tolerance = 1e-6;
    }
    auto gap = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };

    for (const auto& s : samples) {
        std::array<Slots, 3> win{Slots(2, 1), Slots(2, 1), Slots(2, 1)};
        std::array<Slots, 3> jet{Slots(2, 1), Slots(2, 1), Slots(2, 1)};
        bool finite = true;
        for (int k = 0; k < 3; ++k) {
            const auto i = static_cast<std::size_t>(k);
            const double a = s.y[i];
            const double b = s.y[i + 1];
            const double c = s.y[i + 2];
            win[i] = Slots(2, 1, {a, b, c});
            jet[i] = Slots(2, 1, {a, b - a, c - 2.0 * b + a});
            finite = finite && V.eval(win[i], s.t + k, s.omega) != kNegInf &&
                     v.eval(jet[i], s.t + k, s.omega) != kNegInf;
        }
        if (!finite) {
            ++report.skipped;
            continue;
        }
        ++report.checked;

        std::array<std::array<double, 3>, 3> Vp{};  // [sample offset][slot]
        std::array<std::array<double, 3>, 3> vp{};
        for (int k = 0; k < 3; ++k) {
            const auto i = static_cast<std::size_t>(k);
            for (int slot = 0; slot < 3; ++slot) {
                const auto j = static_cast<std::size_t>(slot);
                Vp[i][j] = partial_slot(V, slot, 0, win[i], s.t + k, s.omega);
                vp[i][j] = v.analytic_partial(jet[i], s.t + k, s.omega, slot, 0);
                const double fd = fd_partial(v, slot, 0, jet[i], static_cast<double>(s.t + k), s.omega);
                report.fd_gap = std::max(report.fd_gap, gap(vp[i][j], fd));
            }
            report.partial_gap = std::max(report.partial_gap, gap(vp[i][0], Vp[i][0] + Vp[i][1] + Vp[i][2]));
            report.partial_gap = std::max(report.partial_gap, gap(vp[i][1], Vp[i][1] + 2.0 * Vp[i][2]));
            report.partial_gap = std::max(report.partial_gap, gap(vp[i][2], Vp[i][2]));
        }
        const double row = Vp[0][2] + Vp[1][1] + Vp[2][0];
        const double diff_form =
            vp[2][0] + (vp[1][1] - vp[2][1]) + (vp[0][2] - 2.0 * vp[1][2] + vp[2][2]);
        report.euler_gap = std::max(report.euler_gap, gap(diff_form, row));
    }
    report.pass = report.checked > 0 && report.partial_gap <= report.tolerance &&
                  report.euler_gap <= report.tolerance && report.fd_gap <= report.fd_tolerance;
    return report;
}

}  // namespace tvckit
