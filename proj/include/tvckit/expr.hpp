// Arithmetic expression DSL for user-supplied objectives.
//
// Grammar:
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := "-" unary | power
//   power := atom ("^" unary)?
//   atom  := number | ident | func "(" expr ")" | "(" expr ")"
//
// Exponents must be constant expressions; they are folded to a single
// constant at parse time so differentiation stays closed.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tvckit/error.hpp"

namespace tvckit::expr {

enum class TokenKind { number, identifier, op, paren, function, comma };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t position;  // byte offset of the first character
    double number = 0.0;   // parsed value for number tokens
};

// Maximal-munch lexer. Throws SyntaxError on an illegal character.
std::vector<Token> tokenize(std::string_view source);

enum class Func { ln, exp, abs, sqrt };

class UnknownIdentifier : public SyntaxError {
public:
    UnknownIdentifier(std::size_t position, std::string name)
        : SyntaxError(position, "unknown identifier '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Ordered set of declared names; variables resolve to their index here.
class SymbolTable {
public:
    SymbolTable() = default;
    explicit SymbolTable(std::vector<std::string> names);

    int find(std::string_view name) const;  // -1 when undeclared
    const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
    int size() const noexcept { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
};

enum class NodeKind { constant, variable, negate, add, sub, mul, div, pow, call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::constant;
    double value = 0.0;  // constant value, or the exponent for pow
    int symbol = -1;     // variable index
    Func func = Func::ln;
    NodePtr lhs;  // operand for negate/call/pow base
    NodePtr rhs;
};

/// Immutable expression tree bound to a symbol table.
class Expr {
public:
    Expr(NodePtr root, std::shared_ptr<const SymbolTable> symbols);

    const Node& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }
    const SymbolTable& symbols() const noexcept { return *symbols_; }
    const std::shared_ptr<const SymbolTable>& symbols_ptr() const noexcept { return symbols_; }

    // Structural identity of the trees (symbol tables are not compared).
    bool operator==(const Expr& other) const;

private:
    NodePtr root_;
    std::shared_ptr<const SymbolTable> symbols_;
};

// Node constructors; they do not simplify.
NodePtr constant(double v);
NodePtr variable(int symbol);
NodePtr negate(NodePtr operand);
NodePtr binary(NodeKind op, NodePtr lhs, NodePtr rhs);
NodePtr power(NodePtr base, double exponent);
NodePtr call(Func f, NodePtr arg);

Expr parse(std::span<const Token> tokens, const SymbolTable& symbols);
Expr parse(std::string_view source, const SymbolTable& symbols);

/// Evaluate with values indexed by symbol. ln of a nonpositive argument is
/// -inf; division by zero and NaN results throw EvalError.
double eval(const Expr& e, std::span<const double> values);
double eval(const Expr& e, const std::map<std::string, double>& env);

/// Derivative with respect to the given symbol, simplified by constant
/// folding and 0/1 identities only.
Expr symbolic_partial(const Expr& e, int symbol);
Expr symbolic_partial(const Expr& e, std::string_view name);

/// Replace variables by expressions (indexed by symbol; null leaves the variable).
Expr substitute(const Expr& e, const std::vector<NodePtr>& replacements);

/// Pretty-print with minimal parentheses; the output reparses to the same tree.
std::string to_string(const Expr& e);

std::string_view func_name(Func f);
bool depends_on(const Node& n, int symbol);

}  // namespace tvckit::expr
