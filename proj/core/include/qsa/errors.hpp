#pragma once

#include <stdexcept>
#include <string>

namespace qsa {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// su2_log evaluated at (or within 1e-12 of) the antipode -1.
class AntipodalInput : public Error {
public:
    using Error::Error;
};

/// Quaternion inversion with |q| below 1e-14.
class DivisionByZero : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature exhausted its panel budget before meeting tolerance.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// A series evaluation failed to converge within its term budget,
/// or exceeded its analytic majorant.
class SeriesDivergence : public Error {
public:
    using Error::Error;
};

/// A kernel evaluation produced a value below -1e-12 (truncation failure).
class NegativeDensity : public Error {
public:
    using Error::Error;
};

/// A simulated path left its admissible range beyond the boundary guards.
class BlowUp : public Error {
public:
    using Error::Error;
};

/// Ambient sphere path passed too close to the cut locus (|q_{n+1}| < 1e-6).
class ChartFailure : public Error {
public:
    using Error::Error;
};

/// A statistical operation was given fewer samples than it requires.
class InsufficientSamples : public Error {
public:
    using Error::Error;
};

/// A pole coincidence was detected in the partial-fraction residue system.
class DegenerateResidue : public Error {
public:
    using Error::Error;
};

} // namespace qsa
