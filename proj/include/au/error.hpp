#pragma once

#include <stdexcept>
#include <string>

namespace au {

/// Base class of every error raised by the kernel.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ill-scoped input: unbound variable, loose bound index, unknown symbol.
class ScopeError : public Error {
public:
    using Error::Error;
};

class TypeError : public Error {
public:
    using Error::Error;
};

/// A certificate step could not be replayed.
class CertificateError : public Error {
public:
    using Error::Error;
};

/// Misuse of an operation (bad position, misaligned sequences, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Model-side failure: relation not an equivalence, enumeration limit, missing map.
class ModelError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace au
