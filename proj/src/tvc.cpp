#include <algorithm>
#include <cmath>

#include "tvckit/euler.hpp"
#include "tvckit/tvc.hpp"

namespace tvckit {

namespace {

void check_curve(const StochasticPath& path, const PerturbationCurve& curve) {
    if (!path.same_shape(curve.path())) {
        throw InputError("perturbation curve and path differ in domain, states or dimension");
    }
}

void check_space(const SampleSpace& space, const StochasticPath& path) {
    if (space.states() != path.states()) {
        throw InputError("path has " + std::to_string(path.states()) + " states, sample space has " +
                         std::to_string(space.states()));
    }
}

}  // namespace

RandomScalar discrete_tvc_tail_omega(const DiscreteObjective& obj, const StochasticPath& path,
                                     const PerturbationCurve& q, int tprime) {
    check_curve(path, q);
    if (!path.domain().is_discrete()) {
        throw UnsupportedError("discrete tails need a discrete path");
    }
    obj.check_states(path.states());
    const int n = obj.order();
    if (tprime < n - 1 || tprime + n > path.domain().t_max()) {
        throw HorizonError("tail at T'=" + std::to_string(tprime) + " needs " + std::to_string(n - 1) +
                           " <= T' <= T_max - n = " + std::to_string(path.domain().t_max() - n));
    }
    const StochasticPath& qp = q.path();
    std::vector<double> out;
    for (int w = 0; w < path.states(); ++w) {
        double acc = 0.0;
        for (int k = 1; k <= n; ++k) {
            for (int i = 0; i < obj.dim(); ++i) {
                const double qv = qp(tprime + k, w, i);
                double coeff = 0.0;
                for (int j = tprime - n + k; j <= tprime; ++j) {
                    coeff += partial_slot(obj, tprime + k - j, i, window_at(path, j, n, w), j, w);
                }
                acc += coeff * qv;
            }
        }
        out.push_back(acc);
    }
    return RandomScalar(std::move(out));
}

double discrete_tvc_tail(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                         const PerturbationCurve& q, int tprime) {
    check_space(space, path);
    return expectation(space, discrete_tvc_tail_omega(obj, path, q, tprime));
}

TvcReport summarize_tvc(std::vector<double> times, std::vector<double> values, double tolerance) {
    TvcReport report;
    if (values.size() != times.size()) {
        throw InputError("tail sequence and horizon list differ in length");
    }
    if (static_cast<int>(values.size()) < report.window) {
        throw HorizonError("liminf estimation needs at least " + std::to_string(report.window) +
                           " horizons, got " + std::to_string(values.size()));
    }
    report.times = std::move(times);
    report.values = std::move(values);
    report.tolerance = tolerance;
    const std::size_t len = report.values.size();
    report.running_inf.resize(len);
    report.running_sup.resize(len);
    double lo = report.values.back();
    double hi = report.values.back();
    for (std::size_t k = len; k-- > 0;) {
        lo = std::min(lo, report.values[k]);
        hi = std::max(hi, report.values[k]);
        report.running_inf[k] = lo;
        report.running_sup[k] = hi;
    }
    const std::size_t stable = len - static_cast<std::size_t>(report.window);
    report.liminf_estimate = report.running_inf[stable];
    report.limsup_estimate = report.running_sup[stable];
    report.satisfied = report.liminf_estimate <= tolerance;
    report.limsup_holds = report.limsup_estimate >= -tolerance;
    report.equals_zero = std::abs(report.liminf_estimate) <= tolerance && std::abs(report.limsup_estimate) <= tolerance;
    return report;
}

TvcReport tvc_liminf_discrete(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                              const PerturbationCurve& q, std::optional<int> first, std::optional<double> tolerance) {
    check_space(space, path);
    const int n = obj.order();
    std::vector<double> times;
    std::vector<double> values;
    for (int tp = std::max(n - 1, first.value_or(0)); tp + n <= path.domain().t_max(); ++tp) {
        times.push_back(tp);
        values.push_back(discrete_tvc_tail(obj, space, path, q, tp));
    }
    return summarize_tvc(std::move(times), std::move(values), tolerance.value_or(obj.has_partials() ? 1e-8 : 1e-4));
}

struct ContinuousBracket::Impl {
    ContinuousTerms terms;
    std::vector<StochasticPath> p;  // p^(r), r = 0..n-1
    int head;
};

ContinuousBracket::ContinuousBracket(const ContinuousObjective& obj, const StochasticPath& path,
                                     const PerturbationCurve& curve) {
    check_curve(path, curve);
    if (obj.dim() != 1) {
        throw UnsupportedError("continuous boundary terms are implemented for scalar states");
    }
    std::vector<StochasticPath> pd{curve.path()};
    for (int r = 1; r < obj.order(); ++r) {
        pd.push_back(time_derivative(curve.path(), r));
    }
    impl_ = std::make_shared<const Impl>(Impl{ContinuousTerms(obj, path), std::move(pd), curve.vanishing_head()});
}

double ContinuousBracket::at(int index, int omega) const {
    const ContinuousTerms& terms = impl_->terms;
    const int n = terms.order();
    double acc = 0.0;
    for (int r = 0; r < n; ++r) {
        if (index == 0 && r < impl_->head) {
            continue;
        }
        const double pr = impl_->p[static_cast<std::size_t>(r)](index, omega);
        double inner = 0.0;
        for (int k = r + 1; k <= n; ++k) {
            const int m = k - r - 1;
            const double d = terms.slot_derivative(k, m)(index, omega);
            inner += (m % 2 == 0 ? d : -d);
        }
        acc += pr * inner;
    }
    if (std::isnan(acc)) {
        throw NumericalError("boundary bracket produced NaN at grid index " + std::to_string(index));
    }
    return acc;
}

RandomScalar ContinuousBracket::at_time(double t) const {
    const int idx = impl_->terms.path().domain().index_of(t);
    std::vector<double> out;
    for (int w = 0; w < impl_->terms.path().states(); ++w) {
        out.push_back(at(idx, w));
    }
    return RandomScalar(std::move(out));
}

double continuous_boundary_term(const ContinuousObjective& obj, const SampleSpace& space, const StochasticPath& path,
                                const PerturbationCurve& p, double t) {
    check_space(space, path);
    return expectation(space, ContinuousBracket(obj, path, p).at_time(t));
}

TvcReport tvc_liminf_continuous(const ContinuousObjective& obj, const SampleSpace& space, const StochasticPath& path,
                                const PerturbationCurve& p, std::vector<double> horizons,
                                std::optional<double> tolerance) {
    check_space(space, path);
    if (horizons.empty()) {
        for (int T = 1; T <= static_cast<int>(std::floor(path.domain().t_end() + 1e-9)); ++T) {
            horizons.push_back(T);
        }
    }
    const ContinuousBracket bracket(obj, path, p);
    const double at0 = expectation(space, bracket.at_time(0.0));
    std::vector<double> values;
    for (double T : horizons) {
        values.push_back(expectation(space, bracket.at_time(T)) - at0);
    }
    return summarize_tvc(std::move(horizons), std::move(values), tolerance.value_or(1e-4));
}

PerturbationCurve kamihigashi_curve(const StochasticPath& path, double level, RampSpec ramp) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InputError("ramp level must lie strictly inside (0, 1)");
    }
    return ramp_times_path(path, level, ramp);
}

namespace {

double truncated_objective(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                           int tprime) {
    const int n = obj.order();
    double total = 0.0;
    for (int j = 0; j <= tprime; ++j) {
        std::vector<double> vals;
        for (int w = 0; w < path.states(); ++w) {
            vals.push_back(obj.eval(window_at(path, j, n, w), j, w));
        }
        const double e = expectation(space, RandomScalar(std::move(vals)));
        if (e == kNegInf) {
            throw DomainError("objective is -inf at t=" + std::to_string(j) + " under the perturbation");
        }
        total += e;
    }
    return total;
}

}  // namespace

DecompositionCheck variation_decomposition_check(const DiscreteObjective& obj, const SampleSpace& space,
                                                 const StochasticPath& path, const PerturbationCurve& q, int tprime,
                                                 double eps) {
    check_space(space, path);
    check_curve(path, q);
    if (!(eps > 0.0)) {
        throw InputError("decomposition step must be positive");
    }
    const int n = obj.order();
    DecompositionCheck out;
    const double up = truncated_objective(obj, space, perturb(path, q, eps), tprime);
    const double down = truncated_objective(obj, space, perturb(path, q, -eps), tprime);
    out.direct = (up - down) / (2.0 * eps);
    for (int t = 0; t <= tprime; ++t) {
        for (int i = 0; i < obj.dim(); ++i) {
            const RandomScalar r = discrete_euler_residual(obj, path, t, BoundaryMode::truncated(), i);
            std::vector<double> weighted;
            for (int w = 0; w < path.states(); ++w) {
                weighted.push_back(r[w] * q.path()(t, w, i));
            }
            const double e = expectation(space, RandomScalar(std::move(weighted)));
            (t < n ? out.boundary : out.interior) += e;
        }
    }
    out.tail = discrete_tvc_tail(obj, space, path, q, tprime);
    out.discrepancy = std::abs(out.direct - (out.boundary + out.interior + out.tail));
    return out;
}

namespace {

double integrated_objective(const ContinuousObjective& obj, const SampleSpace& space, const StochasticPath& path,
                            double tprime) {
    const int n = obj.order();
    std::vector<StochasticPath> jets{path};
    for (int r = 1; r <= n; ++r) {
        jets.push_back(time_derivative(path, r));
    }
    const StochasticPath series =
        StochasticPath::generate(path.domain(), path.states(), 1, [&](int idx, double t, int w, int) {
            Slots s(n, path.dim());
            for (int r = 0; r <= n; ++r) {
                for (int i = 0; i < path.dim(); ++i) {
                    s(r, i) = jets[static_cast<std::size_t>(r)](idx, w, i);
                }
            }
            const double v = obj.eval(s, t, w);
            if (v == kNegInf) {
                throw DomainError("objective is -inf at t=" + std::to_string(t) + " under the perturbation");
            }
            return v;
        });
    return expectation(space, integrate_time(series, tprime));
}

}  // namespace

DecompositionCheck variation_decomposition_check(const ContinuousObjective& obj, const SampleSpace& space,
                                                 const StochasticPath& path, const PerturbationCurve& p,
                                                 double tprime, double eps) {
    check_space(space, path);
    check_curve(path, p);
    if (!(eps > 0.0)) {
        throw InputError("decomposition step must be positive");
    }
    DecompositionCheck out;
    const double up = integrated_objective(obj, space, perturb(path, p, eps), tprime);
    const double down = integrated_objective(obj, space, perturb(path, p, -eps), tprime);
    out.direct = (up - down) / (2.0 * eps);

    const ContinuousTerms terms(obj, path);
    const StochasticPath weighted =
        StochasticPath::generate(path.domain(), path.states(), 1, [&](int idx, double, int w, int) {
            return terms.euler_at(idx, w) * p.path()(idx, w);
        });
    out.interior = expectation(space, integrate_time(weighted, tprime));
    const ContinuousBracket bracket(obj, path, p);
    out.boundary = -expectation(space, bracket.at_time(0.0));
    out.tail = expectation(space, bracket.at_time(tprime));
    out.discrepancy = std::abs(out.direct - (out.boundary + out.interior + out.tail));
    return out;
}

}  // namespace tvckit
