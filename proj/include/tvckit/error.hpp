#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tvckit {

// Root of every exception the toolkit throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something malformed: shapes, parameters, scenario keys.
class InputError : public Error {
public:
    using Error::Error;
};

// A window or stencil would run off the end of the time grid.
class HorizonError : public InputError {
public:
    using InputError::InputError;
};

// Operation not defined for this kind of input (e.g. a derivative of a discrete path).
class UnsupportedError : public InputError {
public:
    using InputError::InputError;
};

// Scenario schema violation; `key_path` names the offending key ("omega.probs").
class ScenarioError : public InputError {
public:
    ScenarioError(std::string key_path, const std::string& what)
        : InputError(key_path + ": " + what), key_path_(std::move(key_path)) {}
    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

// Lexing/parsing failure in the expression DSL, located by byte offset.
class SyntaxError : public InputError {
public:
    SyntaxError(std::size_t position, const std::string& what)
        : InputError("at byte " + std::to_string(position) + ": " + what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// An objective evaluated to -inf where a finite value (or a derivative) was required.
class DomainError : public Error {
public:
    using Error::Error;
};

// Iteration failure, singular systems, NaN production.
class NumericalError : public Error {
public:
    using Error::Error;
};

// DSL evaluation failure: division by zero, NaN, unbound symbol.
class EvalError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace tvckit
