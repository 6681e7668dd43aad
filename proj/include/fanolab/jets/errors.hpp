#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fanolab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands disagree in chart dimension, truncation order or tensor layout.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Division, logarithm or inversion of something whose constant term vanishes.
class SingularError : public Error {
public:
    using Error::Error;
};

/// Not enough jet order left for the requested derivative.
class DegreeError : public Error {
public:
    using Error::Error;
};

/// Constant term of a metric candidate is not positive definite.
class NotAMetricError : public Error {
public:
    using Error::Error;
};

/// Gram matrix of a Galerkin pencil is too close to singular.
class ConditioningError : public Error {
public:
    ConditioningError(const std::string& what, double condition) : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Linear constraint system has no solution at some jet order.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, int order) : Error(what), order_(order) {}
    int order() const noexcept { return order_; }

private:
    int order_;
};

/// The Beltrami equation for new holomorphic coordinates has no solution at some jet order.
class ObstructionError : public InfeasibleError {
public:
    using InfeasibleError::InfeasibleError;
};

/// A DGLA fails one of its axioms; what() names the axiom and the basis witnesses.
class AxiomError : public Error {
public:
    AxiomError(const std::string& what, std::string axiom) : Error(what), axiom_(std::move(axiom)) {}
    const std::string& axiom() const noexcept { return axiom_; }

private:
    std::string axiom_;
};

/// Linear Kuranishi data are not harmonic.
class GaugeError : public Error {
public:
    using Error::Error;
};

} // namespace fanolab
