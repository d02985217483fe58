#include "tvckit/curves.hpp"

#include <cmath>

namespace tvckit {

namespace {

void check_ramp(const RampSpec& ramp) {
    if (!(ramp.end > 0.0)) {
        throw InputError("ramp end must be positive");
    }
    if (ramp.vanishing_head < 0 || ramp.vanishing_head > 3) {
        throw InputError("quintic ramp supports a vanishing head of at most 3");
    }
}

int states_of(const std::vector<double>& per_state) {
    if (per_state.empty()) {
        throw InputError("need one value per state");
    }
    return static_cast<int>(per_state.size());
}

}  // namespace

double smoothstep5(double s) {
    // Snap within 1e-9 of the ends so grid times like k*h land exactly on the
    // plateau; the polynomial is flat to third order there.
    if (s <= 1e-9) {
        return 0.0;
    }
    if (s >= 1.0 - 1e-9) {
        return 1.0;
    }
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

PerturbationCurve ramp_curve(const TimeDomain& domain, const std::vector<double>& p_inf, RampSpec ramp) {
    check_ramp(ramp);
    if (!domain.is_continuous()) {
        throw UnsupportedError("ramp curves live on continuous grids");
    }
    const int m = states_of(p_inf);
    auto path = StochasticPath::scalar(domain, m, [&](double t, int w) {
        return p_inf[static_cast<std::size_t>(w)] * smoothstep5(t / ramp.end);
    });
    TailSpec tail;
    if (ramp.end <= domain.t_end()) {
        tail = {TailSpec::Kind::eventually_constant, domain.time(domain.index_of(ramp.end)), p_inf};
    }
    return PerturbationCurve(std::move(path), ramp.vanishing_head, tail);
}

PerturbationCurve compact_ramp_curve(const TimeDomain& domain, const std::vector<double>& p_inf, double down_start,
                                     double support_end, RampSpec ramp) {
    check_ramp(ramp);
    if (!domain.is_continuous()) {
        throw UnsupportedError("ramp curves live on continuous grids");
    }
    if (!(down_start >= ramp.end && support_end > down_start)) {
        throw InputError("compact ramp needs ramp end <= down start < support end");
    }
    const int m = states_of(p_inf);
    const double fall = support_end - down_start;
    auto path = StochasticPath::scalar(domain, m, [&](double t, int w) {
        const double up = smoothstep5(t / ramp.end);
        const double down = 1.0 - smoothstep5((t - down_start) / fall);
        return p_inf[static_cast<std::size_t>(w)] * up * down;
    });
    TailSpec tail;
    if (support_end <= domain.t_end()) {
        tail = {TailSpec::Kind::compact_support, domain.time(domain.index_of(support_end)), {}};
    }
    return PerturbationCurve(std::move(path), ramp.vanishing_head, tail);
}

PerturbationCurve ramp_times_path(const StochasticPath& path, double level, RampSpec ramp) {
    check_ramp(ramp);
    if (!path.domain().is_continuous()) {
        throw UnsupportedError("ramp curves live on continuous grids");
    }
    auto values = StochasticPath::generate(path.domain(), path.states(), path.dim(),
                                           [&](int k, double t, int w, int i) {
                                               return level * smoothstep5(t / ramp.end) * path(k, w, i);
                                           });
    return PerturbationCurve(std::move(values), ramp.vanishing_head);
}

PerturbationCurve step_curve(const TimeDomain& domain, const std::vector<double>& q_inf, int onset) {
    if (!domain.is_discrete()) {
        throw UnsupportedError("step curves live on discrete index sets");
    }
    const int m = states_of(q_inf);
    if (onset < 0 || onset > domain.t_max()) {
        throw InputError("step onset outside the horizon");
    }
    auto path = StochasticPath::scalar(domain, m, [&](double t, int w) {
        return t >= onset ? q_inf[static_cast<std::size_t>(w)] : 0.0;
    });
    return PerturbationCurve(std::move(path), onset,
                             {TailSpec::Kind::eventually_constant, static_cast<double>(onset), q_inf});
}

PerturbationCurve window_curve(const TimeDomain& domain, const std::vector<double>& value, int start, int last) {
    if (!domain.is_discrete()) {
        throw UnsupportedError("window curves live on discrete index sets");
    }
    const int m = states_of(value);
    if (start < 0 || last < start) {
        throw InputError("window curve needs 0 <= start <= last");
    }
    auto path = StochasticPath::scalar(domain, m, [&](double t, int w) {
        return t >= start && t <= last ? value[static_cast<std::size_t>(w)] : 0.0;
    });
    TailSpec tail;
    if (last + 1 <= domain.t_max()) {
        tail = {TailSpec::Kind::compact_support, static_cast<double>(last + 1), {}};
    }
    return PerturbationCurve(std::move(path), start, tail);
}

}  // namespace tvckit
