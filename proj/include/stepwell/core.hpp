#pragma once

#include "stepwell/errors.hpp"

#include <cmath>
#include <string>

namespace stepwell {

/// Flat risk-free rate (continuous compounding, per year) and volatility
/// (per sqrt-year).
struct MarketParams {
    double rate = 0.0;
    double vol = 0.0;

    MarketParams(double rate_, double vol_) : rate(rate_), vol(vol_) {
        if (!(std::isfinite(rate) && std::isfinite(vol)))
            throw ParameterError("MarketParams: rate/vol must be finite");
        if (!(vol > 0.0))
            throw ParameterError("MarketParams: vol must be > 0");
        if (rate < 0.0)
            throw ParameterError("MarketParams: rate must be >= 0");
    }
};

/// Coefficients of the similarity transform that makes the pricing
/// generator Hermitian:
///   alpha = (sigma^2/2 - r) / sigma^2,   gamma = (sigma^2/2 + r)^2 / (2 sigma^2).
struct ModelCoefficients {
    double alpha = 0.0; // drift-removal exponent
    double gamma = 0.0; // energy shift, per year
};

ModelCoefficients model_coefficients(const MarketParams& mp);

/// Standard normal CDF, absolute error < 1e-12 on finite input.
double normal_cdf(double x);

/// Inverse standard normal CDF (Wichura's AS241, double precision).
/// Requires p in (0, 1).
double normal_quantile(double p);

/// Knock-out discount applied per trading day: exp(-v0/250).
double daily_knockout_factor(double v0);

/// Log of the underlying price.
struct LogSpot {
    double value = 0.0;

    constexpr explicit LogSpot(double x) : value(x) {}

    static LogSpot from_price(double s) {
        if (!(s > 0.0) || !std::isfinite(s))
            throw ParameterError("LogSpot: price must be positive and finite");
        return LogSpot(std::log(s));
    }
    double price() const { return std::exp(value); }
};

enum class OptionKind {
    pso_up_out, // proportional step, single upper barrier
    pdbs,       // proportional double-barrier step
    uosb,       // up-and-out standard barrier
    sdb,        // standard double-barrier knock-out
    vanilla,
};

std::string to_string(OptionKind kind);

/// Contract terms. Barriers are stored as log-prices. knockout_rate (V0)
/// applies to the step kinds only.
struct StepOptionSpec {
    OptionKind kind = OptionKind::vanilla;
    double strike = 0.0;        // price units
    double expiry = 0.0;        // years
    double upper_barrier = 0.0; // log-price; B for single-barrier kinds, b for double
    double lower_barrier = 0.0; // log-price; a, double-barrier kinds only
    double knockout_rate = 0.0; // V0, per year

    static StepOptionSpec pso(double strike, double expiry, double upper_barrier, double v0);
    static StepOptionSpec pdbs(double strike, double expiry, double lower_barrier,
                               double upper_barrier, double v0);
    static StepOptionSpec uosb(double strike, double expiry, double upper_barrier);
    static StepOptionSpec sdb(double strike, double expiry, double lower_barrier,
                              double upper_barrier);
    static StepOptionSpec vanilla(double strike, double expiry);

    double log_strike() const { return std::log(strike); }
    bool is_step_kind() const { return kind == OptionKind::pso_up_out || kind == OptionKind::pdbs; }
    bool has_lower_barrier() const { return kind == OptionKind::pdbs || kind == OptionKind::sdb; }
    bool has_upper_barrier() const { return kind != OptionKind::vanilla; }
};

/// Shared cross-validation: the analytic step pricers need V0 strictly above
/// the energy shift gamma, otherwise the sub-barrier wavenumbers are not real.
void validate_step_rate(const MarketParams& mp, const StepOptionSpec& spec);

} // namespace stepwell
