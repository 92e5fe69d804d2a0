#pragma once

#include <stdexcept>
#include <string>

namespace noiselab {

// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Probability argument outside its open or closed domain (e.g. quantile at 0).
class DegenerateProbability : public Error {
public:
    using Error::Error;
};

// Correlation outside the admissible range for the requested routine.
class CorrelationOutOfRange : public Error {
public:
    using Error::Error;
};

// Interval list that cannot be canonicalized (lo > hi, NaN endpoint) or a
// set literal that cannot be parsed; the message carries token and position.
class MalformedInterval : public Error {
public:
    using Error::Error;
};

// Time parameter outside [0, 1) for the Brownian rescaling map.
class TimeOutOfRange : public Error {
public:
    using Error::Error;
};

// Operation requires 0 < gamma(A) < 1 but the set is null or co-null.
class DegenerateMeasure : public Error {
public:
    using Error::Error;
};

// Hermite degree above the overflow guard.
class DegreeTooLarge : public Error {
public:
    using Error::Error;
};

// Exponent outside the admissible range for a power-type functional.
class BadExponent : public Error {
public:
    using Error::Error;
};

// Ratio report requested for a set whose epsilon metric is numerically zero.
class DegenerateEpsilon : public Error {
public:
    using Error::Error;
};

// An underlying adaptive integration exhausted its panel budget.
class NotConverged : public Error {
public:
    using Error::Error;
};

// Quadratic-variation clock is constant; cannot reparametrize the path.
class DegenerateClock : public Error {
public:
    using Error::Error;
};

// Ensemble statistics requested from too few paths.
class InsufficientEnsemble : public Error {
public:
    using Error::Error;
};

// A family grid epsilon makes the family's components overlap or degenerate.
class FamilyDegenerate : public Error {
public:
    using Error::Error;
};

} // namespace noiselab
