#include "stepwell/core.hpp"

#include <cmath>

namespace stepwell {

ModelCoefficients model_coefficients(const MarketParams& mp) {
    const double s2 = mp.vol * mp.vol;
    const double half_s2 = 0.5 * s2;
    ModelCoefficients mc;
    mc.alpha = (half_s2 - mp.rate) / s2;
    mc.gamma = (half_s2 + mp.rate) * (half_s2 + mp.rate) / (2.0 * s2);
    return mc;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

// AS241 algorithm PPND16 (Wichura 1988), relative error ~1e-16.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw ParameterError("normal_quantile: p must lie in (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

double daily_knockout_factor(double v0) {
    if (!(v0 >= 0.0) || !std::isfinite(v0))
        throw ParameterError("daily_knockout_factor: v0 must be >= 0");
    return std::exp(-v0 / 250.0);
}

std::string to_string(OptionKind kind) {
    switch (kind) {
    case OptionKind::pso_up_out: return "pso";
    case OptionKind::pdbs: return "pdbs";
    case OptionKind::uosb: return "uosb";
    case OptionKind::sdb: return "sdb";
    case OptionKind::vanilla: return "vanilla";
    }
    return "unknown";
}

namespace {

void check_common(double strike, double expiry) {
    if (!(strike > 0.0) || !std::isfinite(strike))
        throw ParameterError("StepOptionSpec: strike must be > 0");
    if (!(expiry > 0.0) || !std::isfinite(expiry))
        throw ParameterError("StepOptionSpec: expiry must be > 0");
}

void check_double_barrier(double lower, double upper) {
    if (!(lower < upper))
        throw ParameterError("StepOptionSpec: lower barrier must lie below upper barrier");
}

} // namespace

StepOptionSpec StepOptionSpec::pso(double strike, double expiry, double upper_barrier, double v0) {
    check_common(strike, expiry);
    if (!(v0 >= 0.0))
        throw ParameterError("StepOptionSpec: knock-out rate must be >= 0");
    if (!(std::log(strike) < upper_barrier))
        throw ParameterError("StepOptionSpec: PSO requires ln K < B");
    StepOptionSpec s;
    s.kind = OptionKind::pso_up_out;
    s.strike = strike;
    s.expiry = expiry;
    s.upper_barrier = upper_barrier;
    s.knockout_rate = v0;
    return s;
}

StepOptionSpec StepOptionSpec::pdbs(double strike, double expiry, double lower_barrier,
                                    double upper_barrier, double v0) {
    check_common(strike, expiry);
    check_double_barrier(lower_barrier, upper_barrier);
    if (!(v0 >= 0.0))
        throw ParameterError("StepOptionSpec: knock-out rate must be >= 0");
    StepOptionSpec s;
    s.kind = OptionKind::pdbs;
    s.strike = strike;
    s.expiry = expiry;
    s.lower_barrier = lower_barrier;
    s.upper_barrier = upper_barrier;
    s.knockout_rate = v0;
    return s;
}

StepOptionSpec StepOptionSpec::uosb(double strike, double expiry, double upper_barrier) {
    check_common(strike, expiry);
    StepOptionSpec s;
    s.kind = OptionKind::uosb;
    s.strike = strike;
    s.expiry = expiry;
    s.upper_barrier = upper_barrier;
    return s;
}

StepOptionSpec StepOptionSpec::sdb(double strike, double expiry, double lower_barrier,
                                   double upper_barrier) {
    check_common(strike, expiry);
    check_double_barrier(lower_barrier, upper_barrier);
    StepOptionSpec s;
    s.kind = OptionKind::sdb;
    s.strike = strike;
    s.expiry = expiry;
    s.lower_barrier = lower_barrier;
    s.upper_barrier = upper_barrier;
    return s;
}

StepOptionSpec StepOptionSpec::vanilla(double strike, double expiry) {
    check_common(strike, expiry);
    StepOptionSpec s;
    s.kind = OptionKind::vanilla;
    s.strike = strike;
    s.expiry = expiry;
    return s;
}

void validate_step_rate(const MarketParams& mp, const StepOptionSpec& spec) {
    if (!spec.is_step_kind())
        return;
    const double gamma = model_coefficients(mp).gamma;
    if (!(spec.knockout_rate > gamma))
        throw ParameterError("step option requires V0 > gamma (got V0=" +
                             std::to_string(spec.knockout_rate) +
                             ", gamma=" + std::to_string(gamma) + ")");
}

} // namespace stepwell
