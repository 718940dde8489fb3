#pragma once

#include "stepwell/errors.hpp"

#include <functional>

namespace stepwell {

/// Tolerances and truncation controls shared by every integral in the
/// pricing modules.
struct QuadConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    /// Width multiplier for the sigma*sqrt(tau)-scaled cut applied to
    /// semi-infinite payoff integrals (see the step pricers).
    double tail_sigmas = 8.0;
    /// Fraction of the momentum range clipped at singular/marginal endpoints.
    double endpoint_clip = 1e-6;
};

void validate(const QuadConfig& cfg);

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    int subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod 7/15 integration of f on [lo, hi].
/// Deterministic for fixed inputs. Throws QuadratureError (carrying the best
/// estimate) if the tolerance is not met within cfg.max_subdivisions.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     const QuadConfig& cfg);

/// Integrates f on [lo, +inf) for integrands eventually dominated by
/// exp(-decay_rate * x). Truncates at lo + max(50, tail_sigmas)/decay_rate;
/// the exponential tail bound is folded into err_estimate.
/// decay_rate <= 0 signals the marginally convergent case and throws
/// DivergenceError.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double lo,
                                   double decay_rate, const QuadConfig& cfg);

} // namespace stepwell
