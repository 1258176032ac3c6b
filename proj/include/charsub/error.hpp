#pragma once

#include <stdexcept>
#include <string>

namespace charsub {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed sequence, point, set or descriptor spec string.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

/// A configured cap (term index, term size, grid size, scan horizon) was hit.
class ResourceLimit : public Error {
public:
    explicit ResourceLimit(const std::string& what) : Error("resource limit: " + what) {}
};

class InconsistentMetadata : public Error {
public:
    explicit InconsistentMetadata(const std::string& what)
        : Error("inconsistent metadata: " + what) {}
};

class UnknownAsymptotics : public Error {
public:
    explicit UnknownAsymptotics(const std::string& what)
        : Error("unknown asymptotics: " + what) {}
};

/// A digit stream breaks 0 <= c_n < q_n or cannot prove c_n < q_n - 1 infinitely often.
class DigitConstraintError : public Error {
public:
    explicit DigitConstraintError(const std::string& what)
        : Error("digit constraint: " + what) {}
};

class InvalidGaps : public Error {
public:
    explicit InvalidGaps(const std::string& what) : Error("invalid gaps: " + what) {}
};

class UnsupportedDescriptor : public Error {
public:
    explicit UnsupportedDescriptor(const std::string& what)
        : Error("unsupported descriptor: " + what) {}
};

class NotCountable : public Error {
public:
    explicit NotCountable(const std::string& what) : Error("not countable: " + what) {}
};

class CannotCertify : public Error {
public:
    explicit CannotCertify(const std::string& what) : Error("cannot certify: " + what) {}
};

/// A precondition on the arguments was violated.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain error: " + what) {}
};

}  // namespace charsub
