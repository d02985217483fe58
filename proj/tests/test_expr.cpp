#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "tvckit/expr.hpp"

using namespace tvckit;
using namespace tvckit::expr;

namespace {

SymbolTable xyz() { return SymbolTable({"x", "y", "z"}); }

double ev(const std::string& src, std::vector<double> vals) {
    const Expr e = parse(src, xyz());
    return eval(e, vals);
}

}  // namespace

TEST(Lexer, TokensAndPositions) {
    const auto toks = tokenize("2.5e1*ln(x_1)");
    ASSERT_EQ(toks.size(), 6u);
    EXPECT_EQ(toks[0].kind, TokenKind::number);
    EXPECT_DOUBLE_EQ(toks[0].number, 25.0);
    EXPECT_EQ(toks[2].kind, TokenKind::function);
    EXPECT_EQ(toks[4].lexeme, "x_1");
    EXPECT_EQ(toks[4].position, 9u);
}

TEST(Lexer, IllegalCharacterHasPosition) {
    try {
        tokenize("x + $");
        FAIL() << "no error";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.position(), 4u);
    }
}

TEST(Parser, PrecedenceAndAssociativity) {
    EXPECT_DOUBLE_EQ(ev("1 + 2 * 3", {0, 0, 0}), 7.0);
    EXPECT_DOUBLE_EQ(ev("8 - 3 - 2", {0, 0, 0}), 3.0);
    EXPECT_DOUBLE_EQ(ev("8 / 4 / 2", {0, 0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(ev("-x^2", {3, 0, 0}), -9.0);
    EXPECT_DOUBLE_EQ(ev("2^3^2", {0, 0, 0}), 512.0);
    EXPECT_DOUBLE_EQ(ev("(x + y) * z", {1, 2, 3}), 9.0);
}

TEST(Parser, FunctionsEvaluate) {
    EXPECT_NEAR(ev("ln(exp(x))", {1.7, 0, 0}), 1.7, 1e-15);
    EXPECT_DOUBLE_EQ(ev("sqrt(x) + abs(y)", {16, -2, 0}), 6.0);
}

TEST(Parser, UnknownIdentifierNamed) {
    try {
        parse("x * delta", xyz());
        FAIL() << "no error";
    } catch (const UnknownIdentifier& e) {
        EXPECT_EQ(e.name(), "delta");
        EXPECT_EQ(e.position(), 4u);
        EXPECT_NE(std::string(e.what()).find("delta"), std::string::npos);
    }
}

TEST(Parser, SyntaxErrors) {
    EXPECT_THROW(parse("x +", xyz()), SyntaxError);
    EXPECT_THROW(parse("(x", xyz()), SyntaxError);
    EXPECT_THROW(parse("x y", xyz()), SyntaxError);
    EXPECT_THROW(parse("x ^ y", xyz()), SyntaxError);
    EXPECT_THROW(parse("ln x", xyz()), SyntaxError);
}

TEST(Eval, LogOfNonpositiveIsNegInf) {
    EXPECT_EQ(ev("ln(x)", {0, 0, 0}), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(ev("ln(x - 1)", {0.5, 0, 0}), -std::numeric_limits<double>::infinity());
}

TEST(Eval, DivisionByZeroThrows) { EXPECT_THROW(ev("x / y", {1, 0, 0}), EvalError); }

TEST(Eval, EnvironmentMap) {
    const Expr e = parse("x * y + z", xyz());
    EXPECT_DOUBLE_EQ(eval(e, std::map<std::string, double>{{"x", 2}, {"y", 3}, {"z", 4}}), 10.0);
    EXPECT_THROW(eval(e, std::map<std::string, double>{{"x", 2}}), EvalError);
}

TEST(Derivative, MatchesFiniteDifferences) {
    const std::vector<std::string> sources{"x^3 * y - z / x", "ln(x + y^2) * exp(-z)", "sqrt(x*y) + abs(z - 1)",
                                           "(x - 2)^2 + 0.5*y + 0.25*z", "exp(z*ln(x)) / (1 + y^2)"};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (const auto& src : sources) {
        const Expr e = parse(src, xyz());
        for (int k = 0; k < 20; ++k) {
            std::vector<double> v{u(rng), u(rng), u(rng)};
            for (int s = 0; s < 3; ++s) {
                const Expr d = symbolic_partial(e, s);
                const double h = 1e-6;
                auto vp = v;
                auto vm = v;
                vp[static_cast<std::size_t>(s)] += h;
                vm[static_cast<std::size_t>(s)] -= h;
                const double fd = (eval(e, vp) - eval(e, vm)) / (2 * h);
                EXPECT_NEAR(eval(d, v), fd, 1e-6 * std::max(1.0, std::abs(fd))) << src << " d/d" << s;
            }
        }
    }
}

TEST(Derivative, SimplifiesConstants) {
    const Expr e = parse("3*x + 2", xyz());
    EXPECT_EQ(to_string(symbolic_partial(e, "x")), "3");
    EXPECT_EQ(to_string(symbolic_partial(e, "y")), "0");
}

TEST(PrettyPrint, RoundTripsStructurally) {
    for (const char* src : {"x - (y - z)", "x / (y * z)", "-(x + y)^2", "2^-1", "(x^2)^3", "ln(x) * -y", "x - -y"}) {
        const Expr e = parse(src, xyz());
        const Expr again = parse(to_string(e), xyz());
        EXPECT_TRUE(e == again) << src << " -> " << to_string(e);
        std::vector<double> v{1.3, 0.7, 2.1};
        EXPECT_DOUBLE_EQ(eval(e, v), eval(again, v)) << src;
    }
}

TEST(Substitute, ReplacesVariables) {
    const Expr e = parse("x * y", xyz());
    std::vector<NodePtr> repl(3);
    repl[1] = binary(NodeKind::add, variable(0), constant(1.0));
    const Expr s = substitute(e, repl);
    EXPECT_DOUBLE_EQ(eval(s, std::vector<double>{2, 100, 0}), 6.0);
}
