#pragma once

#include <stdexcept>
#include <string>

namespace moderf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument that does not fit any of the more specific categories.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Integration bounds reversed or non-finite.
class InvalidInterval : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a function (negative x, NaN, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Refinement or iteration budget exhausted before the tolerance was met.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// A function handed to the fixed-point operator is not a member of K.
class KViolation : public Error {
public:
    using Error::Error;
};

/// delta lies outside the range where the contraction argument applies.
class DeltaOutOfRange : public Error {
public:
    using Error::Error;
};

/// An initial-value shot left the admissible band.
class BlowUp : public Error {
public:
    BlowUp(const std::string& what, double x, double y)
        : Error(what), x_(x), y_(y) {}

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }

private:
    double x_;
    double y_;
};

/// The adaptive ODE step size underflowed.
class StiffnessFailure : public Error {
public:
    using Error::Error;
};

/// No sign change of the far-field defect over the slope search interval,
/// or the defect was found to be non-monotone in the slope.
class BracketFailure : public Error {
public:
    using Error::Error;
};

/// Inputs too close to each other for a ratio to be meaningful.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

}  // namespace moderf
