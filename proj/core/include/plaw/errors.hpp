#pragma once

#include <stdexcept>
#include <string>

namespace plaw {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not deliver a result at the requested accuracy.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Force or potential evaluated at the origin.
class CollisionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// alpha == 2: the zero-energy metric is a cylinder, there is no cone or dual.
class CylinderCase : public DomainError {
public:
    using DomainError::DomainError;
};

/// The sublevel set {V_eff <= E} is empty.
class EmptyHill : public DomainError {
public:
    using DomainError::DomainError;
};

/// A point lies outside the Hill region {V <= E}.
class OutsideHill : public DomainError {
public:
    using DomainError::DomainError;
};

/// Cone of angle >= 2 pi cannot be realised as a cone of revolution.
class NotEmbeddable : public DomainError {
public:
    using DomainError::DomainError;
};

/// Adaptive step collapsed below what double precision can represent.
class StepUnderflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Curve sampled too coarsely for branch tracking or finite differences.
class UnderSampled : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A multivalued power map was asked to pass through the origin.
class OriginCrossing : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Quadrature did not reach its tolerance.
class QuadratureFailure : public NumericalError {
public:
    QuadratureFailure(const std::string& what, double achieved_error)
        : NumericalError(what + " (estimated error " + std::to_string(achieved_error) + ")"),
          achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

}  // namespace plaw
