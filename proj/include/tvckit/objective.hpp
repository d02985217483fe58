// Reduced-form objectives of order n: discrete V(y_t..y_{t+n}, t, omega) and
// continuous v(x, x', .., x^(n), t, omega), with slot partials.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tvckit/core.hpp"
#include "tvckit/expr.hpp"

namespace tvckit {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Objective of order n over N-dimensional states. `Time` is int for discrete
/// models and double for continuous ones. Values lie in [-inf, inf).
template <typename Time>
class ReducedObjective {
public:
    using EvalFn = std::function<double(const Slots&, Time, int omega)>;
    using PartialFn = std::function<double(const Slots&, Time, int omega, int slot, int comp)>;

    // `states` = 0 means the objective accepts any sample space.
    ReducedObjective(std::string name, int order, int dim, EvalFn eval, PartialFn partial = {}, int states = 0)
        : name_(std::move(name)),
          order_(order),
          dim_(dim),
          states_(states),
          eval_(std::move(eval)),
          partial_(std::move(partial)) {
        if (order_ < 0 || dim_ < 1 || !eval_) {
            throw InputError("objective needs order >= 0, dim >= 1 and an evaluator");
        }
    }

    const std::string& name() const noexcept { return name_; }
    int order() const noexcept { return order_; }
    int dim() const noexcept { return dim_; }
    int states() const noexcept { return states_; }
    bool has_partials() const noexcept { return static_cast<bool>(partial_); }

    double eval(const Slots& s, Time t, int omega) const {
        check_shape(s);
        const double v = eval_(s, t, omega);
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
            throw NumericalError("objective '" + name_ + "' returned " + (std::isnan(v) ? "NaN" : "+inf"));
        }
        return v;
    }

    double analytic_partial(const Slots& s, Time t, int omega, int slot, int comp) const {
        if (!partial_) {
            throw UnsupportedError("objective '" + name_ + "' has no analytic partials");
        }
        check_shape(s);
        return partial_(s, t, omega, slot, comp);
    }

    ReducedObjective with_partials(PartialFn partial) const {
        ReducedObjective copy = *this;
        copy.partial_ = std::move(partial);
        return copy;
    }
    ReducedObjective without_partials() const { return with_partials({}); }

    void check_states(int m) const {
        if (states_ != 0 && states_ != m) {
            throw InputError("objective '" + name_ + "' is defined for " + std::to_string(states_) +
                             " states, sample space has " + std::to_string(m));
        }
    }

private:
    void check_shape(const Slots& s) const {
        if (s.order() != order_ || s.dim() != dim_) {
            throw InputError("objective '" + name_ + "' expects order " + std::to_string(order_) + ", dim " +
                             std::to_string(dim_));
        }
    }

    std::string name_;
    int order_;
    int dim_;
    int states_;
    EvalFn eval_;
    PartialFn partial_;
};

using DiscreteObjective = ReducedObjective<int>;
using ContinuousObjective = ReducedObjective<double>;

/// Central difference in one slot with step 1e-6 * max(1, |value|); falls back
/// to a one-sided difference when one neighbour is -inf.
template <typename Time>
double fd_partial(const ReducedObjective<Time>& obj, int slot, int comp, const Slots& at, Time t, int omega);

/// Analytic partial when available, else fd_partial. Throws DomainError when
/// the objective is -inf at the point.
template <typename Time>
double partial_slot(const ReducedObjective<Time>& obj, int slot, int comp, const Slots& at, Time t, int omega);

template <typename Time>
struct PointSample {
    Slots slots;
    Time t;
    int omega;
};

struct GradientCheckReport {
    double max_gap = 0.0;  // max |analytic - fd| / max(1, |analytic|)
    double tolerance = 1e-6;
    int checked = 0;  // sample points with a finite value
    int skipped = 0;  // sample points at -inf
    int worst_sample = -1;
    int worst_slot = -1;
    bool inconclusive = false;  // every sample sat on the -inf boundary
    bool pass = false;
};

template <typename Time>
GradientCheckReport gradient_check(const ReducedObjective<Time>& obj, const std::vector<PointSample<Time>>& samples,
                                   double tolerance = 1e-6);

// ---------------------------------------------------------------------------
// Built-in models

/// Per-state constants of the quadratic-linear models (all strictly positive).
struct QuadLinParams {
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> gamma;

    int states() const noexcept { return static_cast<int>(alpha.size()); }
    void validate() const;
};

/// v = (x - alpha)^2 + beta x' + gamma x''; partials (2(x - alpha), beta, gamma).
ContinuousObjective quadlin_continuous(const QuadLinParams& p);

/// V = (y_t - alpha)^2 + beta y_{t+1} + gamma y_{t+2}; slot partials (2(y_t - alpha), beta, gamma).
DiscreteObjective quadlin_discrete(const QuadLinParams& p);

/// V(t) = 0 for t < n, discount^t ln(c_t) for t >= n, with
/// c_t = y_t + .. + y_{t+n-1} - y_{t+n}. Returns -inf when c_t <= 0.
DiscreteObjective household_log(double discount, int n);

/// Consumption c_t of the household model from its window.
double household_consumption(const Slots& window);

// ---------------------------------------------------------------------------
// DSL-defined models

/// Objective written in the expression DSL over slot symbols y0..yn, the time
/// symbol t and named per-state constants. Scalar states only.
class DslModel {
public:
    DslModel(std::string source, int order, std::map<std::string, std::vector<double>> constants);

    const std::string& source() const noexcept { return source_; }
    int order() const noexcept { return order_; }
    int states() const noexcept { return states_; }
    const std::map<std::string, std::vector<double>>& constants() const noexcept { return constants_; }
    const expr::Expr& expression() const noexcept { return *expr_; }
    const expr::Expr& partial_expression(int slot) const { return partials_.at(static_cast<std::size_t>(slot)); }

    // Symbol values for a window/jet at time t in state omega.
    std::vector<double> bind(const Slots& s, double t, int omega) const;

    DiscreteObjective discrete() const;
    ContinuousObjective continuous() const;

    static expr::SymbolTable symbols_for(int order, const std::map<std::string, std::vector<double>>& constants);

private:
    std::string source_;
    int order_;
    int states_ = 0;
    std::map<std::string, std::vector<double>> constants_;
    std::optional<expr::Expr> expr_;
    std::vector<expr::Expr> partials_;
};

}  // namespace tvckit
