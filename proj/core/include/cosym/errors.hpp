#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cosym {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A vector or matrix argument does not match the chart dimension.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A scalar field evaluated to a non-finite number. Carries the offending
/// point (t first, then spatial coordinates) so integrators can report the
/// terminal state.
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::vector<double> point)
        : Error(what), point_(std::move(point)) {}
    const std::vector<double>& point() const { return point_; }

private:
    std::vector<double> point_;
};

/// Evaluation inside the collision guard of a gravitational potential.
class CollisionError : public DomainError {
public:
    CollisionError(const std::string& what, std::vector<double> point)
        : DomainError(what, std::move(point)) {}
};

/// Config or input text could not be parsed.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// An iterative solver failed to converge.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error(what) {}
};

} // namespace cosym
