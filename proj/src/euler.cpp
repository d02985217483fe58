#include <algorithm>
#include <charconv>
#include <cmath>

#include "tvckit/euler.hpp"

namespace tvckit {

BoundaryMode BoundaryMode::fixed_initial(int k) {
    if (k < 0) {
        throw InputError("fixed_initial needs k >= 0");
    }
    return {Kind::fixed_initial, k};
}

BoundaryMode BoundaryMode::parse(std::string_view text) {
    if (text == "truncated") {
        return truncated();
    }
    constexpr std::string_view prefix = "fixed:";
    if (text.substr(0, prefix.size()) == prefix) {
        const std::string_view digits = text.substr(prefix.size());
        int k = -1;
        auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec == std::errc() && end == digits.data() + digits.size() && !digits.empty()) {
            return fixed_initial(k);
        }
    }
    throw InputError("boundary mode must be 'truncated' or 'fixed:<k>', got '" + std::string(text) + "'");
}

std::string BoundaryMode::to_string() const {
    return kind == Kind::truncated ? "truncated" : "fixed:" + std::to_string(k);
}

namespace {

void check_discrete(const DiscreteObjective& obj, const StochasticPath& path) {
    if (!path.domain().is_discrete()) {
        throw UnsupportedError("discrete Euler residuals need a discrete path");
    }
    if (path.dim() != obj.dim()) {
        throw InputError("path dimension does not match the objective");
    }
    obj.check_states(path.states());
    if (path.domain().t_max() < obj.order()) {
        throw HorizonError("horizon T_max=" + std::to_string(path.domain().t_max()) + " is shorter than the order " +
                           std::to_string(obj.order()));
    }
}

void check_space(const SampleSpace& space, const StochasticPath& path) {
    if (space.states() != path.states()) {
        throw InputError("path has " + std::to_string(path.states()) + " states, sample space has " +
                         std::to_string(space.states()));
    }
}

}  // namespace

double discrete_euler_residual_at(const DiscreteObjective& obj, const StochasticPath& path, int t, int omega, int comp) {
    const int n = obj.order();
    const int last = path.domain().t_max() - n;
    double acc = 0.0;
    for (int j = std::max(0, t - n); j <= std::min(t, last); ++j) {
        acc += partial_slot(obj, t - j, comp, window_at(path, j, n, omega), j, omega);
    }
    return acc;
}

RandomScalar discrete_euler_residual(const DiscreteObjective& obj, const StochasticPath& path, int t,
                                     BoundaryMode mode, int comp) {
    check_discrete(obj, path);
    const int last = path.domain().t_max() - obj.order();
    if (t < mode.first_row() || t > last) {
        throw HorizonError("Euler row t=" + std::to_string(t) + " outside the admissible range [" +
                           std::to_string(mode.first_row()) + ", " + std::to_string(last) + "] for mode " +
                           mode.to_string());
    }
    std::vector<double> out;
    for (int w = 0; w < path.states(); ++w) {
        out.push_back(discrete_euler_residual_at(obj, path, t, w, comp));
    }
    return RandomScalar(std::move(out));
}

RandomScalar continuous_euler_residual(const ContinuousObjective& obj, const StochasticPath& path, double t,
                                       int comp) {
    const ContinuousTerms terms(obj, path, comp);
    const int idx = path.domain().index_of(t);
    const int n = obj.order();
    if (idx < n || idx > path.points() - 1 - n) {
        throw HorizonError("continuous Euler residual needs t at least n*h from both grid ends");
    }
    std::vector<double> out;
    for (int w = 0; w < path.states(); ++w) {
        out.push_back(terms.euler_at(idx, w));
    }
    return RandomScalar(std::move(out));
}

namespace {

void finish(EulerReport& report, const SampleSpace& space) {
    report.max_abs = 0.0;
    for (std::size_t r = 0; r < report.residuals.size(); ++r) {
        report.expected.push_back(expectation(space, RandomScalar(report.residuals[r])));
        for (double v : report.residuals[r]) {
            if (!(std::abs(v) <= report.max_abs)) {
                report.max_abs = std::abs(v);
                report.worst_row = static_cast<int>(r);
            }
        }
    }
    report.stationary = report.max_abs <= report.tolerance;
}

}  // namespace

EulerReport euler_report(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                         BoundaryMode mode, std::optional<double> tolerance) {
    check_discrete(obj, path);
    check_space(space, path);
    EulerReport report;
    report.mode = mode.to_string();
    report.analytic_partials = obj.has_partials();
    report.tolerance = tolerance.value_or(obj.has_partials() ? 1e-8 : 1e-4);
    const int last = path.domain().t_max() - obj.order();
    for (int t = mode.first_row(); t <= last; ++t) {
        for (int i = 0; i < obj.dim(); ++i) {
            report.times.push_back(t);
            report.residuals.push_back(discrete_euler_residual(obj, path, t, mode, i).values());
        }
    }
    finish(report, space);
    return report;
}

EulerReport euler_report(const ContinuousObjective& obj, const SampleSpace& space, const StochasticPath& path,
                         std::optional<double> tolerance) {
    check_space(space, path);
    EulerReport report;
    report.mode = "continuous";
    report.analytic_partials = obj.has_partials();
    report.tolerance = tolerance.value_or(1e-4);
    const int n = obj.order();
    for (int i = 0; i < obj.dim(); ++i) {
        const ContinuousTerms terms(obj, path, i);
        for (int idx = n; idx <= path.points() - 1 - n; ++idx) {
            std::vector<double> row;
            for (int w = 0; w < path.states(); ++w) {
                row.push_back(terms.euler_at(idx, w));
            }
            report.times.push_back(path.domain().time(idx));
            report.residuals.push_back(std::move(row));
        }
    }
    finish(report, space);
    return report;
}

}  // namespace tvckit
