#include "tvckit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "tvckit/finite_diff.hpp"

namespace tvckit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool finite_or_neg_inf(double v) { return std::isfinite(v) || v == kNegInf; }

}  // namespace

// ---------------------------------------------------------------------------
// SampleSpace / RandomScalar

SampleSpace::SampleSpace(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw InputError("sample space needs at least one state");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw InputError("state probabilities must be finite and nonnegative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InputError("state probabilities sum to " + std::to_string(total) + ", expected 1");
    }
}

RandomScalar::RandomScalar(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!finite_or_neg_inf(v)) {
            throw InputError("random scalar entries must be finite or -inf");
        }
    }
}

double expectation(const SampleSpace& space, const RandomScalar& z) {
    if (z.size() != space.states()) {
        throw InputError("expectation: random scalar has " + std::to_string(z.size()) + " states, space has " +
                         std::to_string(space.states()));
    }
    double sum = 0.0;
    for (int w = 0; w < space.states(); ++w) {
        const double p = space.prob(w);
        if (p == 0.0) {
            continue;
        }
        if (z[w] == kNegInf) {
            return kNegInf;
        }
        sum += p * z[w];
    }
    return sum;
}

// ---------------------------------------------------------------------------
// TimeDomain

TimeDomain TimeDomain::discrete(int t_max) {
    if (t_max < 0) {
        throw InputError("discrete horizon must be >= 0");
    }
    return TimeDomain(TimeKind::discrete, t_max + 1, 1.0);
}

TimeDomain TimeDomain::continuous(double t_end, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InputError("continuous grid step must be positive");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw InputError("continuous end time must be positive");
    }
    const double ratio = t_end / h;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, steps)) {
        throw InputError("t_end/h must be an integer");
    }
    if (steps > 5e7) {
        throw InputError("continuous grid too large");
    }
    return TimeDomain(TimeKind::continuous, static_cast<int>(steps) + 1, h);
}

int TimeDomain::t_max() const {
    if (!is_discrete()) {
        throw UnsupportedError("t_max is defined for discrete domains only");
    }
    return points_ - 1;
}

double TimeDomain::t_end() const { return static_cast<double>(points_ - 1) * h_; }

double TimeDomain::step() const { return h_; }

double TimeDomain::time(int index) const { return static_cast<double>(index) * h_; }

int TimeDomain::index_of(double t) const {
    const double ratio = t / h_;
    const double k = std::round(ratio);
    if (!std::isfinite(ratio) || std::abs(ratio - k) > 1e-6 || k < 0.0 || k > points_ - 1) {
        throw InputError("time " + std::to_string(t) + " is not a grid point");
    }
    return static_cast<int>(k);
}

// ---------------------------------------------------------------------------
// Slots

Slots::Slots(int order, int dim)
    : order_(order), dim_(dim), values_(static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(dim), 0.0) {
    if (order < 0 || dim < 1) {
        throw InputError("slots need order >= 0 and dim >= 1");
    }
}

Slots::Slots(int order, int dim, std::vector<double> values) : Slots(order, dim) {
    if (values.size() != values_.size()) {
        throw InputError("slot values have the wrong length");
    }
    values_ = std::move(values);
}

std::span<const double> Slots::slot(int k) const {
    return std::span<const double>(values_).subspan(index(k, 0), static_cast<std::size_t>(dim_));
}

// ---------------------------------------------------------------------------
// StochasticPath

StochasticPath::StochasticPath(TimeDomain domain, int states, int dim)
    : domain_(domain),
      states_(states),
      dim_(dim),
      values_(static_cast<std::size_t>(domain.points()) * static_cast<std::size_t>(states) * static_cast<std::size_t>(dim),
              0.0) {
    if (states < 1 || dim < 1) {
        throw InputError("path needs at least one state and one component");
    }
}

StochasticPath::StochasticPath(TimeDomain domain, int states, int dim, std::vector<double> values)
    : StochasticPath(domain, states, dim) {
    if (values.size() != values_.size()) {
        throw InputError("path values have length " + std::to_string(values.size()) + ", expected " +
                         std::to_string(values_.size()));
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InputError("path values must be finite");
        }
    }
    values_ = std::move(values);
}

StochasticPath StochasticPath::generate(TimeDomain domain, int states, int dim, const Generator& fn) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(domain.points()) * static_cast<std::size_t>(states) *
                   static_cast<std::size_t>(dim));
    for (int k = 0; k < domain.points(); ++k) {
        const double t = domain.time(k);
        for (int w = 0; w < states; ++w) {
            for (int i = 0; i < dim; ++i) {
                values.push_back(fn(k, t, w, i));
            }
        }
    }
    return StochasticPath(domain, states, dim, std::move(values));
}

StochasticPath StochasticPath::scalar(TimeDomain domain, int states,
                                      const std::function<double(double time, int omega)>& fn) {
    return generate(domain, states, 1, [&](int, double t, int w, int) { return fn(t, w); });
}

std::span<const double> StochasticPath::at(int index, int omega) const {
    return std::span<const double>(values_).subspan(offset(index, omega, 0), static_cast<std::size_t>(dim_));
}

StochasticPath StochasticPath::with_value(int index, int omega, int comp, double value) const {
    std::vector<double> copy = values_;
    copy.at(offset(index, omega, comp)) = value;
    return StochasticPath(domain_, states_, dim_, std::move(copy));
}

bool StochasticPath::same_shape(const StochasticPath& other) const {
    return domain_ == other.domain_ && states_ == other.states_ && dim_ == other.dim_;
}

// ---------------------------------------------------------------------------
// PerturbationCurve

PerturbationCurve::PerturbationCurve(StochasticPath values, int vanishing_head, TailSpec tail)
    : path_(std::move(values)), vanishing_head_(vanishing_head), tail_(std::move(tail)) {
    const TimeDomain& dom = path_.domain();
    if (vanishing_head_ < 0) {
        throw InputError("vanishing head must be >= 0");
    }
    if (dom.is_discrete()) {
        if (vanishing_head_ > dom.points()) {
            throw InputError("vanishing head exceeds the horizon");
        }
        for (int k = 0; k < vanishing_head_; ++k) {
            for (int w = 0; w < path_.states(); ++w) {
                for (int i = 0; i < path_.dim(); ++i) {
                    if (path_(k, w, i) != 0.0) {
                        throw InputError("curve head is not zero at index " + std::to_string(k));
                    }
                }
            }
        }
    } else if (vanishing_head_ > 0) {
        const double tol = 10.0 * dom.step();
        for (int r = 0; r < vanishing_head_; ++r) {
            if (r > 0 && dom.points() < 2 * r + 1) {
                throw InputError("grid too short to validate the curve head");
            }
            const StochasticPath d = r == 0 ? path_ : time_derivative(path_, r);
            for (int w = 0; w < path_.states(); ++w) {
                for (int i = 0; i < path_.dim(); ++i) {
                    if (std::abs(d(0, w, i)) > tol) {
                        throw InputError("curve derivative of order " + std::to_string(r) + " is not zero at t=0");
                    }
                }
            }
        }
    }

    if (tail_.kind == TailSpec::Kind::none) {
        return;
    }
    const int onset = dom.is_discrete() ? static_cast<int>(tail_.onset) : dom.index_of(tail_.onset);
    if (dom.is_discrete() && static_cast<double>(onset) != tail_.onset) {
        throw InputError("discrete tail onset must be an integer");
    }
    if (onset < 0 || onset >= dom.points()) {
        throw InputError("tail onset outside the grid");
    }
    const std::size_t width = static_cast<std::size_t>(path_.states()) * static_cast<std::size_t>(path_.dim());
    if (tail_.kind == TailSpec::Kind::eventually_constant && tail_.values.size() != width) {
        throw InputError("eventually-constant tail needs one value per (state, component)");
    }
    for (int k = onset; k < dom.points(); ++k) {
        for (int w = 0; w < path_.states(); ++w) {
            for (int i = 0; i < path_.dim(); ++i) {
                const double expected = tail_.kind == TailSpec::Kind::compact_support
                                            ? 0.0
                                            : tail_.values[static_cast<std::size_t>(w * path_.dim() + i)];
                if (path_(k, w, i) != expected) {
                    throw InputError("curve violates its declared tail at index " + std::to_string(k));
                }
            }
        }
    }
}

PerturbationCurve PerturbationCurve::scaled(double factor) const {
    std::vector<double> values = path_.values();
    for (double& v : values) {
        v *= factor;
    }
    TailSpec tail = tail_;
    for (double& v : tail.values) {
        v *= factor;
    }
    return PerturbationCurve(StochasticPath(path_.domain(), path_.states(), path_.dim(), std::move(values)),
                             vanishing_head_, std::move(tail));
}

// ---------------------------------------------------------------------------
// Operations

StochasticPath perturb(const StochasticPath& base, const StochasticPath& direction, double eps) {
    if (!base.same_shape(direction)) {
        throw InputError("perturb: base and curve differ in domain, states or dimension");
    }
    std::vector<double> values = base.values();
    const auto& d = direction.values();
    for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] += eps * d[k];
    }
    return StochasticPath(base.domain(), base.states(), base.dim(), std::move(values));
}

StochasticPath perturb(const StochasticPath& base, const PerturbationCurve& curve, double eps) {
    return perturb(base, curve.path(), eps);
}

StochasticPath time_derivative(const StochasticPath& path, int k) {
    const TimeDomain& dom = path.domain();
    if (!dom.is_continuous()) {
        throw UnsupportedError("time derivatives need a continuous domain");
    }
    if (k < 1) {
        throw InputError("derivative order must be >= 1");
    }
    const int points = dom.points();
    if (points < 2 * k + 1) {
        throw InputError("need at least " + std::to_string(2 * k + 1) + " grid points for derivative order " +
                         std::to_string(k));
    }
    const double scale = std::pow(dom.step(), -k);
    // Stencil shapes repeat: cache weights by offset pattern.
    std::map<std::vector<int>, std::vector<double>> cache;
    const int width = path.states() * path.dim();
    std::vector<double> out(path.values().size());
    const auto& in = path.values();
    for (int idx = 0; idx < points; ++idx) {
        const std::vector<int> offs = stencil_offsets(k, idx, points);
        auto it = cache.find(offs);
        if (it == cache.end()) {
            std::vector<double> real_offs(offs.begin(), offs.end());
            it = cache.emplace(offs, fd_weights(k, real_offs)).first;
        }
        const std::vector<double>& wts = it->second;
        for (int c = 0; c < width; ++c) {
            double acc = 0.0;
            for (std::size_t s = 0; s < offs.size(); ++s) {
                acc += wts[s] * in[static_cast<std::size_t>((idx + offs[s]) * width + c)];
            }
            out[static_cast<std::size_t>(idx * width + c)] = acc * scale;
        }
    }
    return StochasticPath(dom, path.states(), path.dim(), std::move(out));
}

RandomScalar integrate_time(const StochasticPath& series, double up_to) {
    const TimeDomain& dom = series.domain();
    if (!dom.is_continuous()) {
        throw UnsupportedError("integrate_time needs a continuous domain");
    }
    if (series.dim() != 1) {
        throw InputError("integrate_time expects a scalar series");
    }
    const int last = dom.index_of(up_to);
    const double h = dom.step();
    std::vector<double> out(static_cast<std::size_t>(series.states()), 0.0);
    for (int w = 0; w < series.states(); ++w) {
        double acc = 0.0;
        for (int k = 0; k < last; ++k) {
            acc += 0.5 * (series(k, w) + series(k + 1, w));
        }
        out[static_cast<std::size_t>(w)] = acc * h;
    }
    return RandomScalar(std::move(out));
}

Slots window_at(const StochasticPath& path, int t, int n, int omega) {
    if (!path.domain().is_discrete()) {
        throw UnsupportedError("windows need a discrete domain");
    }
    if (n < 0 || t < 0 || t + n > path.domain().t_max()) {
        throw HorizonError("window [" + std::to_string(t) + ", " + std::to_string(t + n) + "] runs off the horizon " +
                           std::to_string(path.domain().t_max()));
    }
    Slots out(n, path.dim());
    for (int k = 0; k <= n; ++k) {
        for (int i = 0; i < path.dim(); ++i) {
            out(k, i) = path(t + k, omega, i);
        }
    }
    return out;
}

std::vector<Slots> window(const StochasticPath& path, int t, int n) {
    std::vector<Slots> out;
    out.reserve(static_cast<std::size_t>(path.states()));
    for (int w = 0; w < path.states(); ++w) {
        out.push_back(window_at(path, t, n, w));
    }
    return out;
}

}  // namespace tvckit
