#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eagerlog {

/// Position of a diagnostic in a source file (1-based line and column).
struct SourceSpan {
    std::string file;
    std::size_t line = 0;
    std::size_t column = 0;

    std::string str() const;
};

/// Base of all errors raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A user-facing problem with the input (syntax, facts, program shape).
class UserError : public Error {
public:
    using Error::Error;
};

class ParseError : public UserError {
public:
    ParseError(SourceSpan span, const std::string& message);
    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }

private:
    SourceSpan span_;
    std::string message_;
};

class StratificationError : public UserError {
public:
    using UserError::UserError;
};

/// Failure inside a functor or oracle during evaluation.
class EvalError : public UserError {
public:
    using UserError::UserError;
};

/// Broken engine invariant (validator bug, corrupted id, ...).
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace eagerlog
