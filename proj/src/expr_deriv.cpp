#include "tvckit/expr.hpp"

namespace tvckit::expr {

namespace {

bool is_const(const NodePtr& n, double v) { return n->kind == NodeKind::constant && n->value == v; }
bool is_const(const NodePtr& n) { return n->kind == NodeKind::constant; }

// Simplifying constructors: constant folding and 0/1 identities only.

NodePtr s_neg(NodePtr a) {
    if (is_const(a)) {
        return constant(-a->value);
    }
    return negate(std::move(a));
}

NodePtr s_add(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return constant(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return binary(NodeKind::add, std::move(a), std::move(b));
}

NodePtr s_sub(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return constant(a->value - b->value);
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return s_neg(std::move(b));
    return binary(NodeKind::sub, std::move(a), std::move(b));
}

NodePtr s_mul(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return constant(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return binary(NodeKind::mul, std::move(a), std::move(b));
}

NodePtr s_div(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b) && b->value != 0.0) return constant(a->value / b->value);
    if (is_const(a, 0.0)) return constant(0.0);
    if (is_const(b, 1.0)) return a;
    return binary(NodeKind::div, std::move(a), std::move(b));
}

NodePtr s_pow(NodePtr base, double exponent) {
    if (exponent == 0.0) return constant(1.0);
    if (exponent == 1.0) return base;
    return power(std::move(base), exponent);
}

NodePtr derive(const NodePtr& n, int symbol) {
    switch (n->kind) {
        case NodeKind::constant:
            return constant(0.0);
        case NodeKind::variable:
            return constant(n->symbol == symbol ? 1.0 : 0.0);
        case NodeKind::negate:
            return s_neg(derive(n->lhs, symbol));
        case NodeKind::add:
            return s_add(derive(n->lhs, symbol), derive(n->rhs, symbol));
        case NodeKind::sub:
            return s_sub(derive(n->lhs, symbol), derive(n->rhs, symbol));
        case NodeKind::mul:
            return s_add(s_mul(derive(n->lhs, symbol), n->rhs), s_mul(n->lhs, derive(n->rhs, symbol)));
        case NodeKind::div: {
            NodePtr num = s_sub(s_mul(derive(n->lhs, symbol), n->rhs), s_mul(n->lhs, derive(n->rhs, symbol)));
            return s_div(std::move(num), s_pow(n->rhs, 2.0));
        }
        case NodeKind::pow: {
            NodePtr outer = s_mul(constant(n->value), s_pow(n->lhs, n->value - 1.0));
            return s_mul(std::move(outer), derive(n->lhs, symbol));
        }
        case NodeKind::call: {
            NodePtr du = derive(n->lhs, symbol);
            switch (n->func) {
                case Func::ln:
                    return s_div(std::move(du), n->lhs);
                case Func::exp:
                    return s_mul(n, std::move(du));
                case Func::abs:
                    return s_mul(s_div(n->lhs, n), std::move(du));
                case Func::sqrt:
                    return s_div(std::move(du), s_mul(constant(2.0), n));
            }
        }
    }
    return constant(0.0);
}

NodePtr replace(const NodePtr& n, const std::vector<NodePtr>& replacements) {
    switch (n->kind) {
        case NodeKind::constant:
            return n;
        case NodeKind::variable: {
            const auto idx = static_cast<std::size_t>(n->symbol);
            return idx < replacements.size() && replacements[idx] ? replacements[idx] : n;
        }
        case NodeKind::negate:
            return negate(replace(n->lhs, replacements));
        case NodeKind::call:
            return call(n->func, replace(n->lhs, replacements));
        case NodeKind::pow:
            return power(replace(n->lhs, replacements), n->value);
        default:
            return binary(n->kind, replace(n->lhs, replacements), replace(n->rhs, replacements));
    }
}

}  // namespace

Expr symbolic_partial(const Expr& e, int symbol) {
    if (symbol < 0 || symbol >= e.symbols().size()) {
        throw InputError("cannot differentiate with respect to an undeclared symbol");
    }
    return Expr(derive(e.root_ptr(), symbol), e.symbols_ptr());
}

Expr symbolic_partial(const Expr& e, std::string_view name) {
    const int symbol = e.symbols().find(name);
    if (symbol < 0) {
        throw InputError("cannot differentiate with respect to undeclared '" + std::string(name) + "'");
    }
    return symbolic_partial(e, symbol);
}

Expr substitute(const Expr& e, const std::vector<NodePtr>& replacements) {
    return Expr(replace(e.root_ptr(), replacements), e.symbols_ptr());
}

}  // namespace tvckit::expr
