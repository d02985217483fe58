#include <cmath>
#include <limits>

#include "tvckit/expr.hpp"

namespace tvckit::expr {

namespace {

double checked(double v, const char* what) {
    if (std::isnan(v)) {
        throw EvalError(std::string("NaN produced by ") + what);
    }
    return v;
}

double eval_node(const Node& n, std::span<const double> values) {
    switch (n.kind) {
        case NodeKind::constant:
            return n.value;
        case NodeKind::variable:
            if (n.symbol < 0 || static_cast<std::size_t>(n.symbol) >= values.size()) {
                throw EvalError("unbound symbol #" + std::to_string(n.symbol));
            }
            return values[static_cast<std::size_t>(n.symbol)];
        case NodeKind::negate:
            return -eval_node(*n.lhs, values);
        case NodeKind::add:
            return checked(eval_node(*n.lhs, values) + eval_node(*n.rhs, values), "addition");
        case NodeKind::sub:
            return checked(eval_node(*n.lhs, values) - eval_node(*n.rhs, values), "subtraction");
        case NodeKind::mul:
            return checked(eval_node(*n.lhs, values) * eval_node(*n.rhs, values), "multiplication");
        case NodeKind::div: {
            const double num = eval_node(*n.lhs, values);
            const double den = eval_node(*n.rhs, values);
            if (den == 0.0) {
                throw EvalError("division by zero");
            }
            return checked(num / den, "division");
        }
        case NodeKind::pow: {
            const double base = eval_node(*n.lhs, values);
            if (base == 0.0 && n.value < 0.0) {
                throw EvalError("division by zero (zero to a negative power)");
            }
            return checked(std::pow(base, n.value), "power");
        }
        case NodeKind::call: {
            const double x = eval_node(*n.lhs, values);
            switch (n.func) {
                case Func::ln:
                    return x <= 0.0 ? -std::numeric_limits<double>::infinity() : std::log(x);
                case Func::exp:
                    return std::exp(x);
                case Func::abs:
                    return std::abs(x);
                case Func::sqrt:
                    return checked(std::sqrt(x), "sqrt");
            }
        }
    }
    throw EvalError("malformed expression node");
}

}  // namespace

double eval(const Expr& e, std::span<const double> values) {
    if (static_cast<int>(values.size()) < e.symbols().size()) {
        throw EvalError("expected " + std::to_string(e.symbols().size()) + " symbol values, got " +
                        std::to_string(values.size()));
    }
    return eval_node(e.root(), values);
}

double eval(const Expr& e, const std::map<std::string, double>& env) {
    std::vector<double> values(static_cast<std::size_t>(e.symbols().size()), std::numeric_limits<double>::quiet_NaN());
    std::vector<bool> bound(values.size(), false);
    for (int i = 0; i < e.symbols().size(); ++i) {
        auto it = env.find(e.symbols().name(i));
        if (it != env.end()) {
            values[static_cast<std::size_t>(i)] = it->second;
            bound[static_cast<std::size_t>(i)] = true;
        }
    }
    for (int i = 0; i < e.symbols().size(); ++i) {
        if (!bound[static_cast<std::size_t>(i)] && depends_on(e.root(), i)) {
            throw EvalError("unbound symbol '" + e.symbols().name(i) + "'");
        }
    }
    return eval_node(e.root(), values);
}

}  // namespace tvckit::expr
