// Finite probability space, time grids, stochastic paths and perturbations,
// plus the elementary calculus (expectation, time derivatives, quadrature)
// the engines are built from.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tvckit/error.hpp"

namespace tvckit {

/// A finite sample space {1..m} with probability mass per state.
/// States are addressed by 0-based index throughout the library.
class SampleSpace {
public:
    explicit SampleSpace(std::vector<double> probs);

    int states() const noexcept { return static_cast<int>(probs_.size()); }
    double prob(int omega) const { return probs_.at(static_cast<std::size_t>(omega)); }
    const std::vector<double>& probs() const noexcept { return probs_; }

private:
    std::vector<double> probs_;
};

/// Mapping omega -> value. Entries are finite or -inf (never NaN or +inf).
class RandomScalar {
public:
    RandomScalar() = default;
    explicit RandomScalar(std::vector<double> values);

    int size() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int omega) const { return values_.at(static_cast<std::size_t>(omega)); }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Sum over states of prob * value. Any -inf on a positive-probability state
/// makes the result -inf; zero-probability states are ignored.
double expectation(const SampleSpace& space, const RandomScalar& z);

enum class TimeKind { discrete, continuous };

/// Discrete index set {0..t_max} or the uniform grid t_k = k*h on [0, t_end].
class TimeDomain {
public:
    static TimeDomain discrete(int t_max);
    static TimeDomain continuous(double t_end, double h);

    TimeKind kind() const noexcept { return kind_; }
    bool is_discrete() const noexcept { return kind_ == TimeKind::discrete; }
    bool is_continuous() const noexcept { return kind_ == TimeKind::continuous; }

    // Number of grid points (t_max + 1 for discrete).
    int points() const noexcept { return points_; }
    int t_max() const;
    double t_end() const;
    double step() const;  // 1 for discrete, h for continuous

    double time(int index) const;
    // Grid index of a time value; throws InputError when t is off-grid.
    int index_of(double t) const;

    bool operator==(const TimeDomain& other) const = default;

private:
    TimeDomain(TimeKind kind, int points, double h) : kind_(kind), points_(points), h_(h) {}

    TimeKind kind_;
    int points_;
    double h_;
};

/// Order-n window (y_t..y_{t+n}) or jet (x, x', .., x^(n)): n+1 slots of N components.
class Slots {
public:
    Slots(int order, int dim);
    Slots(int order, int dim, std::vector<double> values);

    int order() const noexcept { return order_; }
    int dim() const noexcept { return dim_; }
    int size() const noexcept { return static_cast<int>(values_.size()); }

    double operator()(int slot, int comp = 0) const { return values_[index(slot, comp)]; }
    double& operator()(int slot, int comp = 0) { return values_[index(slot, comp)]; }
    std::span<const double> slot(int k) const;
    const std::vector<double>& flat() const noexcept { return values_; }

private:
    std::size_t index(int slot, int comp) const {
        return static_cast<std::size_t>(slot) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(comp);
    }

    int order_;
    int dim_;
    std::vector<double> values_;
};

/// Trajectory y(t, omega) in R^N defined at every (grid point, state) pair.
class StochasticPath {
public:
    using Generator = std::function<double(int index, double time, int omega, int comp)>;

    StochasticPath(TimeDomain domain, int states, int dim);
    StochasticPath(TimeDomain domain, int states, int dim, std::vector<double> values);

    static StochasticPath generate(TimeDomain domain, int states, int dim, const Generator& fn);
    // Scalar path with one value per (index, omega).
    static StochasticPath scalar(TimeDomain domain, int states,
                                 const std::function<double(double time, int omega)>& fn);

    const TimeDomain& domain() const noexcept { return domain_; }
    int states() const noexcept { return states_; }
    int dim() const noexcept { return dim_; }
    int points() const noexcept { return domain_.points(); }

    double operator()(int index, int omega, int comp = 0) const { return values_[offset(index, omega, comp)]; }
    std::span<const double> at(int index, int omega) const;
    const std::vector<double>& values() const noexcept { return values_; }

    StochasticPath with_value(int index, int omega, int comp, double value) const;
    bool same_shape(const StochasticPath& other) const;

private:
    std::size_t offset(int index, int omega, int comp) const {
        return (static_cast<std::size_t>(index) * static_cast<std::size_t>(states_) + static_cast<std::size_t>(omega)) *
                   static_cast<std::size_t>(dim_) +
               static_cast<std::size_t>(comp);
    }

    TimeDomain domain_;
    int states_;
    int dim_;
    std::vector<double> values_;
};

/// Tail structure of a perturbation curve.
struct TailSpec {
    enum class Kind { none, eventually_constant, compact_support };
    Kind kind = Kind::none;
    // First time (grid time; an index for discrete domains) from which the tail holds.
    double onset = 0.0;
    // eventually_constant only: tail value per (omega, comp), omega-major.
    std::vector<double> values;
};

/// Variation p(t, omega) or q(t, omega) added to a candidate optimum with scale eps.
///
/// `vanishing_head = k` asserts the first k values (discrete) or the value and
/// first k-1 derivatives at t = 0 (continuous, within 10*h) are zero. The
/// constructor validates this and the tail claim; downstream code relies on
/// the flag, e.g. continuous boundary terms treat p^(r)(0) for r < k as exactly 0.
class PerturbationCurve {
public:
    explicit PerturbationCurve(StochasticPath values, int vanishing_head = 0, TailSpec tail = {});

    const StochasticPath& path() const noexcept { return path_; }
    int vanishing_head() const noexcept { return vanishing_head_; }
    const TailSpec& tail() const noexcept { return tail_; }

    PerturbationCurve scaled(double factor) const;

private:
    StochasticPath path_;
    int vanishing_head_;
    TailSpec tail_;
};

/// base + eps * curve, pointwise.
StochasticPath perturb(const StochasticPath& base, const PerturbationCurve& curve, double eps);
StochasticPath perturb(const StochasticPath& base, const StochasticPath& direction, double eps);

/// k-th time derivative on a continuous grid: centered second-order stencils on
/// the interior, shifted second-order stencils at the edges.
StochasticPath time_derivative(const StochasticPath& path, int k);

/// Trapezoid integral of a dim-1 series over [0, up_to], per omega.
RandomScalar integrate_time(const StochasticPath& series, double up_to);

/// Window (y(t), .., y(t+n)) for one state.
Slots window_at(const StochasticPath& path, int t, int n, int omega);
/// Windows for every state.
std::vector<Slots> window(const StochasticPath& path, int t, int n);

}  // namespace tvckit
