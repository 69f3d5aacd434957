#pragma once

#include <stdexcept>
#include <string>

namespace superint {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Point outside a chart or system domain (singular set, mu <= 0, V <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Inconsistent SystemSpec (tier/parameter mismatch, bad JSON schema).
class SpecError : public Error {
public:
    using Error::Error;
};

class UnknownObservable : public Error {
public:
    using Error::Error;
};

class SingularMetric : public Error {
public:
    using Error::Error;
};

// Observable failed the homogeneity probe required by Killing-tensor extraction.
class DegreeError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class SamplerExhausted : public Error {
public:
    using Error::Error;
};

// Thrown by the integrator when the flow leaves the admissible region.
class DomainExit : public DomainError {
public:
    DomainExit(double t, const std::string& what) : DomainError(what), exit_time(t) {}
    double exit_time;
};

}  // namespace superint
