#include <cmath>

#include "tvckit/objective.hpp"

namespace tvckit {

void QuadLinParams::validate() const {
    if (alpha.empty() || beta.size() != alpha.size() || gamma.size() != alpha.size()) {
        throw InputError("quadratic-linear params need alpha, beta, gamma with one value per state");
    }
    for (const auto* v : {&alpha, &beta, &gamma}) {
        for (double x : *v) {
            if (!(x > 0.0) || !std::isfinite(x)) {
                throw InputError("quadratic-linear params must be finite and strictly positive");
            }
        }
    }
}

ContinuousObjective quadlin_continuous(const QuadLinParams& p) {
    p.validate();
    auto eval = [p](const Slots& s, double, int w) {
        const auto i = static_cast<std::size_t>(w);
        const double d = s(0) - p.alpha[i];
        return d * d + p.beta[i] * s(1) + p.gamma[i] * s(2);
    };
    auto partial = [p](const Slots& s, double, int w, int slot, int) {
        const auto i = static_cast<std::size_t>(w);
        switch (slot) {
            case 0:
                return 2.0 * (s(0) - p.alpha[i]);
            case 1:
                return p.beta[i];
            default:
                return p.gamma[i];
        }
    };
    return ContinuousObjective("quadlin-continuous", 2, 1, eval, partial, p.states());
}

DiscreteObjective quadlin_discrete(const QuadLinParams& p) {
    p.validate();
    auto eval = [p](const Slots& s, int, int w) {
        const auto i = static_cast<std::size_t>(w);
        const double d = s(0) - p.alpha[i];
        return d * d + p.beta[i] * s(1) + p.gamma[i] * s(2);
    };
    auto partial = [p](const Slots& s, int, int w, int slot, int) {
        const auto i = static_cast<std::size_t>(w);
        switch (slot) {
            case 0:
                return 2.0 * (s(0) - p.alpha[i]);
            case 1:
                return p.beta[i];
            default:
                return p.gamma[i];
        }
    };
    return DiscreteObjective("quadlin-discrete", 2, 1, eval, partial, p.states());
}

double household_consumption(const Slots& window) {
    const int n = window.order();
    double c = -window(n);
    for (int k = 0; k < n; ++k) {
        c += window(k);
    }
    return c;
}

DiscreteObjective household_log(double discount, int n) {
    if (!(discount > 0.0 && discount < 1.0)) {
        throw InputError("household discount must lie strictly inside (0, 1)");
    }
    if (n < 1) {
        throw InputError("household lag order must be >= 1");
    }
    auto eval = [discount, n](const Slots& s, int t, int) {
        if (t <= n - 1) {
            return 0.0;
        }
        const double c = household_consumption(s);
        if (c <= 0.0) {
            return kNegInf;
        }
        return std::pow(discount, t) * std::log(c);
    };
    auto partial = [discount, n](const Slots& s, int t, int, int slot, int) {
        if (t <= n - 1) {
            return 0.0;
        }
        const double sign = slot == n ? -1.0 : 1.0;
        return std::pow(discount, t) * sign / household_consumption(s);
    };
    return DiscreteObjective("household-log", n, 1, eval, partial);
}

// ---------------------------------------------------------------------------
// DslModel

expr::SymbolTable DslModel::symbols_for(int order, const std::map<std::string, std::vector<double>>& constants) {
    std::vector<std::string> names;
    for (int k = 0; k <= order; ++k) {
        names.push_back("y" + std::to_string(k));
    }
    names.emplace_back("t");
    for (const auto& [name, values] : constants) {
        names.push_back(name);
    }
    return expr::SymbolTable(std::move(names));
}

DslModel::DslModel(std::string source, int order, std::map<std::string, std::vector<double>> constants)
    : source_(std::move(source)), order_(order), constants_(std::move(constants)) {
    if (order_ < 0) {
        throw InputError("DSL model order must be >= 0");
    }
    for (const auto& [name, values] : constants_) {
        if (values.empty()) {
            throw InputError("constant '" + name + "' needs at least one value");
        }
        for (double v : values) {
            if (!std::isfinite(v)) {
                throw InputError("constant '" + name + "' must be finite");
            }
        }
        const int m = static_cast<int>(values.size());
        if (states_ != 0 && m != states_) {
            throw InputError("constant '" + name + "' has " + std::to_string(m) + " values, others have " +
                             std::to_string(states_));
        }
        states_ = m;
    }
    const expr::SymbolTable symbols = symbols_for(order_, constants_);
    expr_ = expr::parse(source_, symbols);
    for (int k = 0; k <= order_; ++k) {
        partials_.push_back(expr::symbolic_partial(*expr_, k));
    }
}

std::vector<double> DslModel::bind(const Slots& s, double t, int omega) const {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(order_) + 2 + constants_.size());
    for (int k = 0; k <= order_; ++k) {
        values.push_back(s(k));
    }
    values.push_back(t);
    for (const auto& [name, per_state] : constants_) {
        values.push_back(per_state.at(static_cast<std::size_t>(omega)));
    }
    return values;
}

DiscreteObjective DslModel::discrete() const {
    auto self = std::make_shared<const DslModel>(*this);
    auto eval = [self](const Slots& s, int t, int w) {
        return expr::eval(self->expression(), self->bind(s, static_cast<double>(t), w));
    };
    auto partial = [self](const Slots& s, int t, int w, int slot, int) {
        return expr::eval(self->partial_expression(slot), self->bind(s, static_cast<double>(t), w));
    };
    return DiscreteObjective("dsl:" + source_, order_, 1, eval, partial, states_);
}

ContinuousObjective DslModel::continuous() const {
    auto self = std::make_shared<const DslModel>(*this);
    auto eval = [self](const Slots& s, double t, int w) { return expr::eval(self->expression(), self->bind(s, t, w)); };
    auto partial = [self](const Slots& s, double t, int w, int slot, int) {
        return expr::eval(self->partial_expression(slot), self->bind(s, t, w));
    };
    return ContinuousObjective("dsl:" + source_, order_, 1, eval, partial, states_);
}

}  // namespace tvckit
