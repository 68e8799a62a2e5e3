#pragma once

#include <stdexcept>
#include <string>

namespace frog {

/// Argument outside the mathematical domain of an operation (bad index, value out of range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation called on a model that does not satisfy its hypotheses.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Request cannot be expressed in the chosen representation (e.g. blocks over unbounded gaps).
class NotRepresentable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation would exceed its configured memory or size cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed model, config or verdict file. Carries the offending field path.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace frog
