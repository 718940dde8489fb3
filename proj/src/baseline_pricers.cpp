#include "stepwell/baseline_pricers.hpp"

#include <cmath>

namespace stepwell {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesWeightCut = 1e-14;
} // namespace

double bs_call_closed(const MarketParams& mp, double s, double k, double tau) {
    if (!(s > 0.0) || !(k > 0.0) || !(tau > 0.0))
        throw ParameterError("bs_call_closed: requires s, k, tau > 0");
    const double st = mp.vol * std::sqrt(tau);
    const double d_plus = (std::log(s / k) + (mp.rate + 0.5 * mp.vol * mp.vol) * tau) / st;
    const double d_minus = d_plus - st;
    return s * normal_cdf(d_plus) - k * std::exp(-mp.rate * tau) * normal_cdf(d_minus);
}

double bs_kernel(const MarketParams& mp, double x, double x_prime, double tau) {
    if (!(tau > 0.0))
        throw ParameterError("bs_kernel: requires tau > 0");
    const double var = tau * mp.vol * mp.vol;
    const double x0 = x + tau * (mp.rate - 0.5 * mp.vol * mp.vol);
    const double z = x_prime - x0;
    return std::exp(-mp.rate * tau) * std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * kPi * var);
}

double uosb_price(const MarketParams& mp, LogSpot x, const StepOptionSpec& spec,
                  const QuadConfig& cfg, KernelDiagnostics* diag) {
    if (spec.kind != OptionKind::uosb)
        throw ParameterError("uosb_price: spec kind must be uosb");
    validate(cfg);
    const double barrier = spec.upper_barrier;
    const double ln_k = spec.log_strike();
    const double tau = spec.expiry;
    if (diag)
        *diag = KernelDiagnostics{};
    if (x.value >= barrier || ln_k >= barrier)
        return 0.0;

    const ModelCoefficients coeff = model_coefficients(mp);
    const double sig = mp.vol;
    const double p_hi = 10.0 / (sig * std::sqrt(tau));

    QuadConfig inner_cfg = cfg;
    inner_cfg.rel_tol = 0.1 * cfg.rel_tol;
    inner_cfg.abs_tol = 0.1 * cfg.abs_tol;

    const double xv = x.value;
    auto momentum_integral = [&](double xp) {
        auto f = [&](double p) {
            const double w = std::exp(-0.5 * tau * sig * sig * p * p);
            return w * (std::cos(p * (xv - xp)) - std::cos(p * (xv + xp - 2.0 * barrier)));
        };
        return integrate(f, 0.0, p_hi, inner_cfg).value / kPi;
    };
    auto outer = [&](double xp) {
        return std::exp(coeff.alpha * (xv - xp)) * (std::exp(xp) - spec.strike) *
               momentum_integral(xp);
    };
    const QuadResult res = integrate(outer, ln_k, barrier, cfg);
    if (diag) {
        diag->quadrature_error = res.err_estimate;
        // discarded momentum tail carries weight e^{-50}
        diag->truncation_bound = std::exp(-50.0) * (barrier - ln_k) * spec.strike;
    }
    return std::exp(-tau * coeff.gamma) * res.value;
}

double sdb_price(const MarketParams& mp, LogSpot x, const StepOptionSpec& spec,
                 const QuadConfig& cfg, KernelDiagnostics* diag) {
    if (spec.kind != OptionKind::sdb)
        throw ParameterError("sdb_price: spec kind must be sdb");
    validate(cfg);
    const double a = spec.lower_barrier;
    const double b = spec.upper_barrier;
    const double ln_k = spec.log_strike();
    const double tau = spec.expiry;
    if (diag)
        *diag = KernelDiagnostics{};
    if (x.value <= a || x.value >= b || ln_k >= b)
        return 0.0;

    const ModelCoefficients coeff = model_coefficients(mp);
    const double sig = mp.vol;
    const double width = b - a;
    const double lo = std::max(ln_k, a);

    double total = 0.0;
    double quad_err = 0.0;
    int n = 0;
    for (;;) {
        const int level = n + 1;
        const double pn = level * kPi / width;
        const double weight = std::exp(-0.5 * tau * sig * sig * pn * pn);
        if (weight < kSeriesWeightCut)
            break;
        auto f = [&](double xp) {
            return std::exp(-coeff.alpha * xp) * (std::exp(xp) - spec.strike) *
                   std::sin(pn * (xp - a));
        };
        const QuadResult res = integrate(f, lo, b, cfg);
        total += weight * std::sin(pn * (x.value - a)) * res.value;
        quad_err += weight * res.err_estimate;
        ++n;
    }
    const double scale =
        2.0 / width * std::exp(-tau * coeff.gamma) * std::exp(coeff.alpha * x.value);
    if (diag) {
        diag->terms_used = n;
        diag->quadrature_error = std::fabs(scale) * quad_err;
        diag->truncation_bound = std::fabs(scale) * kSeriesWeightCut * spec.strike * width;
    }
    return scale * total;
}

} // namespace stepwell
