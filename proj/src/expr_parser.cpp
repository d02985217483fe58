#include <charconv>
#include <cmath>
#include <set>

#include "tvckit/expr.hpp"

namespace tvckit::expr {

// ---------------------------------------------------------------------------
// Symbols, nodes, structural identity

SymbolTable::SymbolTable(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second) {
            throw InputError("symbol '" + n + "' declared twice");
        }
    }
}

int SymbolTable::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

Expr::Expr(NodePtr root, std::shared_ptr<const SymbolTable> symbols)
    : root_(std::move(root)), symbols_(std::move(symbols)) {
    if (!root_ || !symbols_) {
        throw InputError("expression needs a root and a symbol table");
    }
}

namespace {

bool same_tree(const Node& a, const Node& b) {
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
        case NodeKind::constant:
            return a.value == b.value;
        case NodeKind::variable:
            return a.symbol == b.symbol;
        case NodeKind::negate:
            return same_tree(*a.lhs, *b.lhs);
        case NodeKind::call:
            return a.func == b.func && same_tree(*a.lhs, *b.lhs);
        case NodeKind::pow:
            return a.value == b.value && same_tree(*a.lhs, *b.lhs);
        default:
            return same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
    }
}

}  // namespace

bool Expr::operator==(const Expr& other) const { return same_tree(*root_, *other.root_); }

NodePtr constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::constant;
    n->value = v;
    return n;
}

NodePtr variable(int symbol) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::variable;
    n->symbol = symbol;
    return n;
}

NodePtr negate(NodePtr operand) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::negate;
    n->lhs = std::move(operand);
    return n;
}

NodePtr binary(NodeKind op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr power(NodePtr base, double exponent) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::pow;
    n->lhs = std::move(base);
    n->value = exponent;
    return n;
}

NodePtr call(Func f, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::call;
    n->func = f;
    n->lhs = std::move(arg);
    return n;
}

std::string_view func_name(Func f) {
    switch (f) {
        case Func::ln:
            return "ln";
        case Func::exp:
            return "exp";
        case Func::abs:
            return "abs";
        case Func::sqrt:
            return "sqrt";
    }
    return "?";
}

bool depends_on(const Node& n, int symbol) {
    switch (n.kind) {
        case NodeKind::constant:
            return false;
        case NodeKind::variable:
            return symbol < 0 || n.symbol == symbol;
        case NodeKind::negate:
        case NodeKind::call:
        case NodeKind::pow:
            return depends_on(*n.lhs, symbol);
        default:
            return depends_on(*n.lhs, symbol) || depends_on(*n.rhs, symbol);
    }
}

// ---------------------------------------------------------------------------
// Recursive-descent parser

namespace {

Func func_from(std::string_view s) {
    if (s == "ln") return Func::ln;
    if (s == "exp") return Func::exp;
    if (s == "abs") return Func::abs;
    return Func::sqrt;
}

class Parser {
public:
    Parser(std::span<const Token> tokens, const SymbolTable& symbols) : tokens_(tokens), symbols_(symbols) {}

    NodePtr parse_all() {
        NodePtr root = parse_expr();
        if (pos_ < tokens_.size()) {
            fail("operator or end of input");
        }
        return root;
    }

private:
    bool at_op(char c) const {
        return pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::op && tokens_[pos_].lexeme[0] == c;
    }
    bool at_paren(char c) const {
        return pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::paren && tokens_[pos_].lexeme[0] == c;
    }
    std::size_t here() const {
        if (pos_ < tokens_.size()) {
            return tokens_[pos_].position;
        }
        if (tokens_.empty()) {
            return 0;
        }
        return tokens_.back().position + tokens_.back().lexeme.size();
    }
    [[noreturn]] void fail(const std::string& expected) const {
        const std::string found = pos_ < tokens_.size() ? "'" + tokens_[pos_].lexeme + "'" : "end of input";
        throw SyntaxError(here(), "unexpected " + found + ", expected " + expected);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (at_op('+') || at_op('-')) {
            const NodeKind op = tokens_[pos_].lexeme[0] == '+' ? NodeKind::add : NodeKind::sub;
            ++pos_;
            lhs = binary(op, lhs, parse_term());
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (at_op('*') || at_op('/')) {
            const NodeKind op = tokens_[pos_].lexeme[0] == '*' ? NodeKind::mul : NodeKind::div;
            ++pos_;
            lhs = binary(op, lhs, parse_unary());
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (at_op('-')) {
            ++pos_;
            return negate(parse_unary());
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (!at_op('^')) {
            return base;
        }
        ++pos_;
        const std::size_t exp_pos = here();
        NodePtr exponent = parse_unary();
        if (depends_on(*exponent, -1)) {
            throw SyntaxError(exp_pos, "exponent must be a constant expression");
        }
        double value = 0.0;
        try {
            value = eval(Expr(exponent, std::make_shared<SymbolTable>()), std::span<const double>{});
        } catch (const EvalError& e) {
            throw SyntaxError(exp_pos, std::string("exponent does not evaluate: ") + e.what());
        }
        if (!std::isfinite(value)) {
            throw SyntaxError(exp_pos, "exponent must be finite");
        }
        return power(base, value);
    }

    NodePtr parse_atom() {
        if (pos_ >= tokens_.size()) {
            fail("number, identifier, function or '('");
        }
        const Token& tok = tokens_[pos_];
        switch (tok.kind) {
            case TokenKind::number:
                ++pos_;
                return constant(tok.number);
            case TokenKind::identifier: {
                if (pos_ + 1 < tokens_.size() && tokens_[pos_ + 1].kind == TokenKind::paren &&
                    tokens_[pos_ + 1].lexeme == "(") {
                    throw SyntaxError(tok.position, "unknown function '" + tok.lexeme + "'");
                }
                const int index = symbols_.find(tok.lexeme);
                if (index < 0) {
                    throw UnknownIdentifier(tok.position, tok.lexeme);
                }
                ++pos_;
                return variable(index);
            }
            case TokenKind::function: {
                const Func f = func_from(tok.lexeme);
                ++pos_;
                if (!at_paren('(')) {
                    fail("'(' after " + tok.lexeme);
                }
                ++pos_;
                NodePtr arg = parse_expr();
                int arity = 1;
                while (pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::comma) {
                    ++pos_;
                    parse_expr();
                    ++arity;
                }
                if (arity != 1) {
                    throw SyntaxError(tok.position, "wrong arity: " + tok.lexeme + " takes 1 argument, got " +
                                                        std::to_string(arity));
                }
                if (!at_paren(')')) {
                    fail("')'");
                }
                ++pos_;
                return call(f, arg);
            }
            case TokenKind::paren:
                if (tok.lexeme == "(") {
                    ++pos_;
                    NodePtr inner = parse_expr();
                    if (!at_paren(')')) {
                        fail("')'");
                    }
                    ++pos_;
                    return inner;
                }
                break;
            default:
                break;
        }
        fail("number, identifier, function or '('");
    }

    std::span<const Token> tokens_;
    const SymbolTable& symbols_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::span<const Token> tokens, const SymbolTable& symbols) {
    Parser p(tokens, symbols);
    NodePtr root = p.parse_all();
    return Expr(std::move(root), std::make_shared<SymbolTable>(symbols));
}

Expr parse(std::string_view source, const SymbolTable& symbols) {
    const auto tokens = tokenize(source);
    return parse(tokens, symbols);
}

// ---------------------------------------------------------------------------
// Printer

namespace {

std::string number_text(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    return v < 0.0 || (v == 0.0 && std::signbit(v)) ? "(" + s + ")" : s;
}

int precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::add:
        case NodeKind::sub:
            return 1;
        case NodeKind::mul:
        case NodeKind::div:
            return 2;
        case NodeKind::negate:
            return 3;
        case NodeKind::pow:
            return 4;
        default:
            return 5;
    }
}

void print(const Node& n, const SymbolTable& symbols, std::string& out);

void print_wrapped(const Node& n, int min_prec, const SymbolTable& symbols, std::string& out) {
    if (precedence(n) >= min_prec) {
        print(n, symbols, out);
        return;
    }
    out += '(';
    print(n, symbols, out);
    out += ')';
}

void print(const Node& n, const SymbolTable& symbols, std::string& out) {
    switch (n.kind) {
        case NodeKind::constant:
            out += number_text(n.value);
            return;
        case NodeKind::variable:
            out += n.symbol >= 0 && n.symbol < symbols.size() ? symbols.name(n.symbol)
                                                              : "$" + std::to_string(n.symbol);
            return;
        case NodeKind::negate:
            out += '-';
            print_wrapped(*n.lhs, 3, symbols, out);
            return;
        case NodeKind::add:
        case NodeKind::sub:
            print_wrapped(*n.lhs, 1, symbols, out);
            out += n.kind == NodeKind::add ? " + " : " - ";
            print_wrapped(*n.rhs, 2, symbols, out);
            return;
        case NodeKind::mul:
        case NodeKind::div:
            print_wrapped(*n.lhs, 2, symbols, out);
            out += n.kind == NodeKind::mul ? "*" : "/";
            print_wrapped(*n.rhs, 3, symbols, out);
            return;
        case NodeKind::pow:
            print_wrapped(*n.lhs, 5, symbols, out);
            out += '^';
            out += number_text(n.value);
            return;
        case NodeKind::call:
            out += func_name(n.func);
            out += '(';
            print(*n.lhs, symbols, out);
            out += ')';
            return;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(e.root(), e.symbols(), out);
    return out;
}

}  // namespace tvckit::expr
