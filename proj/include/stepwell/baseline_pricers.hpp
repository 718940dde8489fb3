#pragma once

#include "stepwell/core.hpp"
#include "stepwell/quadrature.hpp"

namespace stepwell {

struct KernelDiagnostics {
    double quadrature_error = 0.0;
    double truncation_bound = 0.0;
    int terms_used = 0; // eigenfunction series length (SDB)
};

/// Black-Scholes call, closed form: S N(d+) - K e^{-r tau} N(d-).
double bs_call_closed(const MarketParams& mp, double s, double k, double tau);

/// Discounted Gaussian pricing kernel: e^{-r tau} density of the terminal
/// log-price x' given x, with mean x0 = x + tau (r - sigma^2/2).
double bs_kernel(const MarketParams& mp, double x, double x_prime, double tau);

/// Up-and-out standard barrier call via the image-form momentum integral.
/// Returns 0 at or above the barrier.
double uosb_price(const MarketParams& mp, LogSpot x, const StepOptionSpec& spec,
                  const QuadConfig& cfg, KernelDiagnostics* diag = nullptr);

/// Standard double-barrier knock-out call via the hard-well eigenfunction
/// series, truncated when the spectral weight drops below 1e-14.
/// Returns 0 outside (a, b).
double sdb_price(const MarketParams& mp, LogSpot x, const StepOptionSpec& spec,
                 const QuadConfig& cfg, KernelDiagnostics* diag = nullptr);

} // namespace stepwell
