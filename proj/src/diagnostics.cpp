#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "tvckit/diagnostics.hpp"

namespace tvckit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void check_grids(const std::vector<double>& eps, const std::vector<double>& tprime) {
    if (eps.empty() || tprime.empty()) {
        throw InputError("diagnostic grids must not be empty");
    }
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || (i > 0 && !(eps[i] < eps[i - 1]))) {
            throw InputError("eps grid must be positive and strictly decreasing");
        }
    }
    for (std::size_t i = 0; i < tprime.size(); ++i) {
        if (!(tprime[i] >= 0.0) || (i > 0 && !(tprime[i] > tprime[i - 1]))) {
            throw InputError("T' grid must be nonnegative and strictly increasing");
        }
    }
}

void check_inputs(const SampleSpace& space, const StochasticPath& path, const PerturbationCurve& curve) {
    if (!path.same_shape(curve.path())) {
        throw InputError("perturbation curve and path differ in domain, states or dimension");
    }
    if (space.states() != path.states()) {
        throw InputError("path and sample space disagree on the number of states");
    }
}

DiagnosticMatrix empty_matrix(TimeKind kind, std::vector<double> eps, std::vector<double> tprime) {
    DiagnosticMatrix m;
    m.kind = kind;
    m.eps_grid = std::move(eps);
    m.tprime_grid = std::move(tprime);
    m.values.assign(m.tprime_grid.size(), std::vector<double>(m.eps_grid.size(), kNaN));
    m.status.assign(m.tprime_grid.size(), std::vector<CellStatus>(m.eps_grid.size(), CellStatus::finite));
    return m;
}

void require_some_finite(const DiagnosticMatrix& m) {
    if (m.flagged() == m.rows() * m.cols()) {
        throw DomainError("every cell of the diagnostic matrix hit the -inf domain boundary");
    }
}

// Expected value of a per-state difference quotient, or NaN when any state
// with positive mass sits at -inf.
double expected_quotient(const SampleSpace& space, const std::vector<double>& base, const std::vector<double>& moved,
                         double eps) {
    double acc = 0.0;
    for (int w = 0; w < space.states(); ++w) {
        if (space.prob(w) == 0.0) {
            continue;
        }
        const auto i = static_cast<std::size_t>(w);
        if (base[i] == kNegInf || moved[i] == kNegInf) {
            return kNaN;
        }
        acc += space.prob(w) * (moved[i] - base[i]) / eps;
    }
    return acc;
}

}  // namespace

std::string to_string(CellStatus s) {
    switch (s) {
        case CellStatus::finite:
            return "finite";
        case CellStatus::diverging:
            return "diverging";
        case CellStatus::domain_error:
            return "domain-error";
    }
    return "finite";
}

int DiagnosticMatrix::flagged() const {
    int count = 0;
    for (const auto& row : status) {
        count += static_cast<int>(std::count_if(row.begin(), row.end(), [](CellStatus s) {
            return s != CellStatus::finite;
        }));
    }
    return count;
}

std::vector<double> geometric_grid(double first, double last, int count) {
    if (count < 2 || !(first > 0.0) || !(last > 0.0)) {
        throw InputError("geometric grid needs two positive ends and at least two points");
    }
    std::vector<double> out;
    // log10 spacing keeps decade grids exact (1e-1, 1e-2, ...).
    const double lo = std::log10(first);
    const double step = (std::log10(last) - lo) / (count - 1);
    for (int i = 0; i < count; ++i) {
        out.push_back(i == 0 ? first : i == count - 1 ? last : std::pow(10.0, lo + step * i));
    }
    return out;
}

std::vector<double> geometric_horizons(int first, int last, int count) {
    if (first < 1 || last <= first || count < 2) {
        throw InputError("horizon grid needs 1 <= first < last and at least two points");
    }
    std::set<int> picks;
    for (double v : geometric_grid(first, last, count)) {
        picks.insert(static_cast<int>(std::lround(v)));
    }
    return {picks.begin(), picks.end()};
}

DiagnosticMatrix a_grid(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                        const PerturbationCurve& curve, std::vector<double> eps_grid,
                        std::vector<double> tprime_grid) {
    check_inputs(space, path, curve);
    check_grids(eps_grid, tprime_grid);
    const int n = obj.order();
    const int last_t = static_cast<int>(tprime_grid.back());
    for (double tp : tprime_grid) {
        if (tp != std::floor(tp)) {
            throw InputError("discrete T' values must be integers");
        }
    }
    if (last_t + n > path.domain().t_max()) {
        throw HorizonError("T'=" + std::to_string(last_t) + " needs T_max >= " + std::to_string(last_t + n));
    }
    DiagnosticMatrix m = empty_matrix(TimeKind::discrete, std::move(eps_grid), std::move(tprime_grid));

    auto values_at = [&](const StochasticPath& y, int t) {
        std::vector<double> out;
        for (int w = 0; w < y.states(); ++w) {
            out.push_back(obj.eval(window_at(y, t, n, w), t, w));
        }
        return out;
    };
    std::vector<std::vector<double>> base;
    for (int t = 0; t <= last_t; ++t) {
        base.push_back(values_at(path, t));
    }
    for (int c = 0; c < m.cols(); ++c) {
        const double eps = m.eps_grid[static_cast<std::size_t>(c)];
        const StochasticPath moved = perturb(path, curve, eps);
        double acc = 0.0;
        std::size_t row = 0;
        for (int t = 0; t <= last_t && row < m.tprime_grid.size(); ++t) {
            acc += expected_quotient(space, base[static_cast<std::size_t>(t)], values_at(moved, t), eps);
            while (row < m.tprime_grid.size() && static_cast<int>(m.tprime_grid[row]) == t) {
                auto& status = m.status[row][static_cast<std::size_t>(c)];
                if (std::isnan(acc)) {
                    status = CellStatus::domain_error;
                } else if (!std::isfinite(acc)) {
                    status = CellStatus::diverging;
                } else {
                    m.values[row][static_cast<std::size_t>(c)] = acc;
                }
                ++row;
            }
        }
    }
    require_some_finite(m);
    return m;
}

namespace {

std::vector<StochasticPath> jets_of(const StochasticPath& path, int n) {
    std::vector<StochasticPath> jets{path};
    for (int r = 1; r <= n; ++r) {
        jets.push_back(time_derivative(path, r));
    }
    return jets;
}

Slots jet_slots(const std::vector<StochasticPath>& jets, const std::vector<StochasticPath>* dir, double eps, int idx,
                int w) {
    const int n = static_cast<int>(jets.size()) - 1;
    const int dim = jets.front().dim();
    Slots s(n, dim);
    for (int r = 0; r <= n; ++r) {
        for (int i = 0; i < dim; ++i) {
            double v = jets[static_cast<std::size_t>(r)](idx, w, i);
            if (dir != nullptr) {
                v += eps * (*dir)[static_cast<std::size_t>(r)](idx, w, i);
            }
            s(r, i) = v;
        }
    }
    return s;
}

}  // namespace

DiagnosticMatrix a_grid(const ContinuousObjective& obj, const SampleSpace& space, const StochasticPath& path,
                        const PerturbationCurve& curve, std::vector<double> eps_grid,
                        std::vector<double> tprime_grid) {
    check_inputs(space, path, curve);
    check_grids(eps_grid, tprime_grid);
    const TimeDomain& dom = path.domain();
    std::vector<int> rows_idx;
    for (double tp : tprime_grid) {
        rows_idx.push_back(dom.index_of(tp));
    }
    DiagnosticMatrix m = empty_matrix(TimeKind::continuous, std::move(eps_grid), std::move(tprime_grid));
    const int n = obj.order();
    const auto jets = jets_of(path, n);
    const auto dir = jets_of(curve.path(), n);
    const int last = rows_idx.back();
    std::vector<std::vector<double>> base(static_cast<std::size_t>(last) + 1);
    for (int k = 0; k <= last; ++k) {
        for (int w = 0; w < path.states(); ++w) {
            base[static_cast<std::size_t>(k)].push_back(obj.eval(jet_slots(jets, nullptr, 0.0, k, w), dom.time(k), w));
        }
    }
    const double h = dom.step();
    for (int c = 0; c < m.cols(); ++c) {
        const double eps = m.eps_grid[static_cast<std::size_t>(c)];
        double acc = 0.0;
        double prev = 0.0;
        std::size_t row = 0;
        for (int k = 0; k <= last; ++k) {
            std::vector<double> moved;
            for (int w = 0; w < path.states(); ++w) {
                moved.push_back(obj.eval(jet_slots(jets, &dir, eps, k, w), dom.time(k), w));
            }
            const double cur = expected_quotient(space, base[static_cast<std::size_t>(k)], moved, eps);
            if (k > 0) {
                acc += 0.5 * h * (prev + cur);
            }
            prev = cur;
            while (row < rows_idx.size() && rows_idx[row] == k) {
                auto& status = m.status[row][static_cast<std::size_t>(c)];
                if (std::isnan(acc) || std::isnan(cur)) {
                    status = CellStatus::domain_error;
                } else if (!std::isfinite(acc)) {
                    status = CellStatus::diverging;
                } else {
                    m.values[row][static_cast<std::size_t>(c)] = acc;
                }
                ++row;
            }
        }
    }
    require_some_finite(m);
    return m;
}

std::string matrix_csv(const DiagnosticMatrix& m) {
    std::string out = "tprime";
    for (double e : m.eps_grid) {
        out += "," + fmt_double(e);
    }
    out += "\n";
    for (int r = 0; r < m.rows(); ++r) {
        out += fmt_double(m.tprime_grid[static_cast<std::size_t>(r)]);
        for (double v : m.values[static_cast<std::size_t>(r)]) {
            out += "," + fmt_double(v);
        }
        out += "\n";
    }
    return out;
}

std::string describe(const LimitEstimate& e) {
    if (e.diverges) {
        return "DIVERGES";
    }
    if (e.inconclusive) {
        return "INCONCLUSIVE";
    }
    return fmt_double(e.value);
}

GrowthFit fit_growth(const std::vector<double>& x, const std::vector<double>& y) {
    GrowthFit fit;
    const int len = static_cast<int>(std::min(x.size(), y.size()));
    const int m = std::min(len, std::max(3, (len + 1) / 2));
    fit.points = m;
    if (m < 3) {
        return fit;
    }
    const int start = len - m;
    double mx = 0.0;
    double my = 0.0;
    for (int i = start; i < len; ++i) {
        mx += x[static_cast<std::size_t>(i)];
        my += y[static_cast<std::size_t>(i)];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (int i = start; i < len; ++i) {
        const double dx = x[static_cast<std::size_t>(i)] - mx;
        sxx += dx * dx;
        sxy += dx * (y[static_cast<std::size_t>(i)] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (int i = start; i < len; ++i) {
        const double r =
            y[static_cast<std::size_t>(i)] - (fit.intercept + fit.slope * x[static_cast<std::size_t>(i)]);
        ssr += r * r;
    }
    fit.slope_se = std::sqrt(ssr / (m - 2) / sxx);
    const double span = x[static_cast<std::size_t>(len - 1)] - x[static_cast<std::size_t>(start)];
    const double scale = std::max(1.0, std::abs(y[static_cast<std::size_t>(len - 1)]));
    fit.growth = fit.slope > 10.0 * fit.slope_se && fit.slope * span > 1e-9 * scale;
    return fit;
}

LimitEstimate limit_along(const std::vector<double>& x, const std::vector<double>& y, GrowthFit* fit_out) {
    std::vector<double> fx;
    std::vector<double> fy;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (std::isfinite(y[i])) {
            fx.push_back(x[i]);
            fy.push_back(y[i]);
        }
    }
    LimitEstimate out;
    const GrowthFit fit = fit_growth(fx, fy);
    if (fit_out != nullptr) {
        *fit_out = fit;
    }
    if (fy.size() < 3) {
        out.inconclusive = true;
        out.value = fy.empty() ? kNaN : fy.back();
        return out;
    }
    if (fit.growth) {
        out.diverges = true;
        out.value = fy.back();
        return out;
    }
    const double last = fy.back();
    out.value = last;
    out.error = std::abs(last - fy[fy.size() - 2]);
    const double spread =
        std::max(std::abs(last - fy[fy.size() - 2]), std::abs(last - fy[fy.size() - 3]));
    out.inconclusive = spread > 1e-6 * std::max(1.0, std::abs(last));
    return out;
}

LimitEstimate limit_eps_zero(const std::vector<double>& eps, const std::vector<double>& y) {
    std::vector<double> fe;
    std::vector<double> fy;
    for (std::size_t i = 0; i < std::min(eps.size(), y.size()); ++i) {
        if (std::isfinite(y[i])) {
            fe.push_back(eps[i]);
            fy.push_back(y[i]);
        }
    }
    LimitEstimate out;
    const std::size_t k = fe.size();
    if (k < 2) {
        out.inconclusive = true;
        out.value = k == 1 ? fy[0] : kNaN;
        return out;
    }
    auto extrapolate = [&](std::size_t small, std::size_t big) {
        return (fe[big] * fy[small] - fe[small] * fy[big]) / (fe[big] - fe[small]);
    };
    out.value = extrapolate(k - 1, k - 2);
    out.error = k >= 3 ? std::abs(out.value - extrapolate(k - 2, k - 3)) : std::abs(fy[k - 1] - fy[k - 2]);
    return out;
}

IteratedLimits iterated_limits(const DiagnosticMatrix& m) {
    IteratedLimits out;
    out.sufficient = m.rows() >= 4 && m.cols() >= 4;

    std::vector<double> col_limits;
    bool col_inconclusive = false;
    bool col_diverges = false;
    for (int c = 0; c < m.cols(); ++c) {
        std::vector<double> col;
        for (int r = 0; r < m.rows(); ++r) {
            col.push_back(m.values[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        }
        GrowthFit fit;
        const LimitEstimate e = limit_along(m.tprime_grid, col, &fit);
        out.along_T.push_back(e);
        out.growth.push_back(fit);
        col_diverges = col_diverges || e.diverges;
        col_inconclusive = col_inconclusive || e.inconclusive;
        col_limits.push_back(e.diverges || e.inconclusive ? kNaN : e.value);
    }
    if (col_diverges) {
        out.eps_then_T.diverges = true;
    } else if (col_inconclusive) {
        out.eps_then_T.inconclusive = true;
        out.eps_then_T.value = kNaN;
    } else {
        out.eps_then_T = limit_eps_zero(m.eps_grid, col_limits);
    }

    std::vector<double> row_limits;
    for (int r = 0; r < m.rows(); ++r) {
        const LimitEstimate e = limit_eps_zero(m.eps_grid, m.values[static_cast<std::size_t>(r)]);
        out.along_eps.push_back(e);
        row_limits.push_back(e.inconclusive ? kNaN : e.value);
    }
    out.T_then_eps = limit_along(m.tprime_grid, row_limits);
    if (!out.T_then_eps.diverges && !out.T_then_eps.inconclusive) {
        double worst = 0.0;
        for (const auto& e : out.along_eps) {
            worst = std::max(worst, e.error);
        }
        out.T_then_eps.error = std::max(out.T_then_eps.error, worst);
    }
    return out;
}

std::string to_string(Uniformity u) {
    switch (u) {
        case Uniformity::uniform:
            return "UNIFORM";
        case Uniformity::non_uniform:
            return "NON_UNIFORM";
        case Uniformity::inconclusive:
            return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

UniformityVerdict uniformity_verdict(const DiagnosticMatrix& m, double tolerance) {
    UniformityVerdict v;
    v.tolerance = tolerance;
    v.limits = iterated_limits(m);
    for (const auto& g : v.limits.growth) {
        v.max_growth_slope = std::max(v.max_growth_slope, g.slope);
    }
    for (int r = 0; r < m.rows(); ++r) {
        double sup = 0.0;
        for (int c = 0; c < m.cols(); ++c) {
            const double a = m.values[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            const double b = m.values.back()[static_cast<std::size_t>(c)];
            const double d = std::abs(a - b);
            sup = std::isnan(d) ? kNaN : std::max(sup, d);
            if (std::isnan(sup)) {
                break;
            }
        }
        v.deviation_profile.push_back(sup);
    }
    if (!v.limits.sufficient) {
        v.reason = "fewer than 4 grid points on an axis";
        return v;
    }
    for (std::size_t c = 0; c < v.limits.growth.size(); ++c) {
        if (v.limits.growth[c].growth) {
            v.verdict = Uniformity::non_uniform;
            v.reason = "A grows in T' at eps=" + fmt_double(m.eps_grid[c]) + " (slope " +
                       fmt_double(v.limits.growth[c].slope) + ")";
            return v;
        }
    }
    const LimitEstimate& a = v.limits.eps_then_T;
    const LimitEstimate& b = v.limits.T_then_eps;
    if (a.diverges != b.diverges) {
        v.verdict = Uniformity::non_uniform;
        v.reason = "one iterated limit diverges, the other is finite";
        return v;
    }
    if (a.diverges || a.inconclusive || b.inconclusive) {
        v.reason = "iterated limits could not both be estimated";
        return v;
    }
    v.limit_gap = std::abs(a.value - b.value);
    const double err = std::max(a.error, b.error);
    if (v.limit_gap > std::max(10.0 * err, tolerance)) {
        v.verdict = Uniformity::non_uniform;
        v.reason = "iterated limits differ by " + fmt_double(v.limit_gap) + " against error " + fmt_double(err);
        return v;
    }
    const double dev = m.rows() >= 2 ? v.deviation_profile[v.deviation_profile.size() - 2] : kNaN;
    if (dev <= tolerance) {
        v.verdict = Uniformity::uniform;
        v.reason = "iterated limits agree and sup_eps deviation is " + fmt_double(dev);
    } else {
        v.reason = "iterated limits agree but the deviation profile " + fmt_double(dev) + " exceeds the tolerance";
    }
    return v;
}

namespace {

void finish_cell(DominationCell& cell, const std::vector<double>& trace) {
    cell.sup = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i] > cell.sup) {
            cell.sup = trace[i];
            cell.sup_eps = static_cast<double>(i);
        }
    }
    const std::size_t len = trace.size();
    if (len >= 5) {
        bool increasing = true;
        for (std::size_t i = len - 4; i < len; ++i) {
            increasing = increasing && trace[i] > trace[i - 1];
        }
        cell.growth = increasing && trace[len - 1] >= 2.0 * trace[len - 5];
    }
}

void finish_report(DominationReport& rep) {
    rep.bound = 0.0;
    rep.flagged = 0;
    for (auto& cell : rep.cells) {
        cell.sup_eps = rep.eps_grid[static_cast<std::size_t>(cell.sup_eps)];
        if (cell.domain_error || cell.growth) {
            ++rep.flagged;
        } else {
            rep.bound = std::max(rep.bound, cell.sup);
        }
    }
    rep.bounded = rep.flagged == 0;
}

std::vector<double> halving_grid(double eps_bar, int levels) {
    if (!(eps_bar > 0.0)) {
        throw InputError("eps_bar must be positive");
    }
    if (levels < 1) {
        throw InputError("domination check needs at least one eps level");
    }
    std::vector<double> grid;
    for (int k = 0; k < levels; ++k) {
        grid.push_back(std::ldexp(eps_bar, -k));
    }
    return grid;
}

}  // namespace

DominationReport domination_check(const DiscreteObjective& obj, const StochasticPath& path,
                                  const PerturbationCurve& curve, double eps_bar, const std::vector<int>& times,
                                  int levels) {
    if (!path.same_shape(curve.path())) {
        throw InputError("perturbation curve and path differ in domain, states or dimension");
    }
    DominationReport rep;
    rep.eps_bar = eps_bar;
    rep.eps_grid = halving_grid(eps_bar, levels);
    const int n = obj.order();
    std::vector<StochasticPath> moved;
    for (double eps : rep.eps_grid) {
        moved.push_back(perturb(path, curve, eps));
    }
    for (int t : times) {
        for (int w = 0; w < path.states(); ++w) {
            DominationCell cell;
            cell.t = t;
            cell.omega = w;
            const double base = obj.eval(window_at(path, t, n, w), t, w);
            std::vector<double> trace;
            for (std::size_t k = 0; k < rep.eps_grid.size() && base != kNegInf; ++k) {
                const double v = obj.eval(window_at(moved[k], t, n, w), t, w);
                if (v == kNegInf) {
                    break;
                }
                trace.push_back(std::abs((v - base) / rep.eps_grid[k]));
            }
            cell.domain_error = trace.size() != rep.eps_grid.size();
            finish_cell(cell, trace);
            rep.cells.push_back(cell);
        }
    }
    finish_report(rep);
    return rep;
}

DominationReport domination_check(const ContinuousObjective& obj, const StochasticPath& path,
                                  const PerturbationCurve& curve, double eps_bar, const std::vector<double>& times,
                                  int levels) {
    if (!path.same_shape(curve.path())) {
        throw InputError("perturbation curve and path differ in domain, states or dimension");
    }
    DominationReport rep;
    rep.eps_bar = eps_bar;
    rep.eps_grid = halving_grid(eps_bar, levels);
    const int n = obj.order();
    const auto jets = jets_of(path, n);
    const auto dir = jets_of(curve.path(), n);
    for (double t : times) {
        const int idx = path.domain().index_of(t);
        for (int w = 0; w < path.states(); ++w) {
            DominationCell cell;
            cell.t = t;
            cell.omega = w;
            const double base = obj.eval(jet_slots(jets, nullptr, 0.0, idx, w), t, w);
            std::vector<double> trace;
            for (std::size_t k = 0; k < rep.eps_grid.size() && base != kNegInf; ++k) {
                const double v = obj.eval(jet_slots(jets, &dir, rep.eps_grid[k], idx, w), t, w);
                if (v == kNegInf) {
                    break;
                }
                trace.push_back(std::abs((v - base) / rep.eps_grid[k]));
            }
            cell.domain_error = trace.size() != rep.eps_grid.size();
            finish_cell(cell, trace);
            rep.cells.push_back(cell);
        }
    }
    finish_report(rep);
    return rep;
}

}  // namespace tvckit
