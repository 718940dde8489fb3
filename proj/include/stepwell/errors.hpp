#pragma once

#include <stdexcept>
#include <string>

namespace stepwell {

/// Base class for all stepwell errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid market/contract/configuration input.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
/// Carries the best available estimate and its error bound.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double best_estimate, double error_bound)
        : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}
    double best_estimate() const { return best_estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

/// Integral diverges (or is marginally convergent) under the requested setup.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// The square well supports no bound state for the given geometry.
class NoBoundStateError : public Error {
public:
    using Error::Error;
};

/// Requested evaluation point/strike lies outside the region the pricing
/// formulas cover.
class UnsupportedRegionError : public Error {
public:
    using Error::Error;
};

/// A closed-form approximation was evaluated outside its domain of validity.
class ApproximationDomainError : public Error {
public:
    using Error::Error;
};

/// Caller broke an internal contract (e.g. kernel region inconsistent with
/// the coordinates).
class ContractError : public Error {
public:
    using Error::Error;
};

} // namespace stepwell
