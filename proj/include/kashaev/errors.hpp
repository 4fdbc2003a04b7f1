#ifndef KASHAEV_ERRORS_HPP
#define KASHAEV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kashaev {

/// Argument outside the domain of an operation (also covers range and
/// validation failures; the CLI maps all of them to the same exit code).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class RangeError : public DomainError {
public:
    explicit RangeError(const std::string& what) : DomainError(what) {}
};

class ValidationError : public DomainError {
public:
    explicit ValidationError(const std::string& what) : DomainError(what) {}
};

/// Exact arithmetic on a fixed-width integer type would overflow.
class OverflowError : public std::overflow_error {
public:
    explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

/// Work exceeds the configured enumeration budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical result failed its own stability check.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kashaev

#endif
