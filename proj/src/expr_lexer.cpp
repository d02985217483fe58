#include <cctype>
#include <charconv>

#include "tvckit/expr.hpp"

namespace tvckit::expr {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

bool is_function_name(std::string_view s) { return s == "ln" || s == "exp" || s == "abs" || s == "sqrt"; }

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = source.size();
    while (i < n) {
        const char c = source[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c)) {
            while (i < n && is_digit(source[i])) {
                ++i;
            }
            if (i + 1 < n && source[i] == '.' && is_digit(source[i + 1])) {
                ++i;
                while (i < n && is_digit(source[i])) {
                    ++i;
                }
            }
            // Exponent only when digits follow; "2e" lexes as 2 then identifier e.
            if (i < n && (source[i] == 'e' || source[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (source[j] == '+' || source[j] == '-')) {
                    ++j;
                }
                if (j < n && is_digit(source[j])) {
                    i = j;
                    while (i < n && is_digit(source[i])) {
                        ++i;
                    }
                }
            }
            Token tok{TokenKind::number, std::string(source.substr(start, i - start)), start};
            const auto res = std::from_chars(tok.lexeme.data(), tok.lexeme.data() + tok.lexeme.size(), tok.number);
            if (res.ec != std::errc()) {
                throw SyntaxError(start, "number out of range '" + tok.lexeme + "'");
            }
            tokens.push_back(std::move(tok));
            continue;
        }
        if (is_ident_start(c)) {
            while (i < n && is_ident_char(source[i])) {
                ++i;
            }
            std::string word(source.substr(start, i - start));
            const TokenKind kind = is_function_name(word) ? TokenKind::function : TokenKind::identifier;
            tokens.push_back({kind, std::move(word), start});
            continue;
        }
        switch (c) {
            case '+':
            case '-':
            case '*':
            case '/':
            case '^':
                tokens.push_back({TokenKind::op, std::string(1, c), start});
                break;
            case '(':
            case ')':
                tokens.push_back({TokenKind::paren, std::string(1, c), start});
                break;
            case ',':
                tokens.push_back({TokenKind::comma, std::string(1, c), start});
                break;
            default:
                throw SyntaxError(start, std::string("illegal character '") + c + "'");
        }
        ++i;
    }
    return tokens;
}

}  // namespace tvckit::expr
