#include "stepwell/step_pricers.hpp"

#include "stepwell/baseline_pricers.hpp"

#include <cmath>

namespace stepwell {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kExteriorMassCut = 1e-14; // e^{-2 k2 L} at the x'' truncation

double sum_components(PricingResult& result) {
    double total = 0.0;
    for (const auto& [label, value] : result.components)
        total += value;
    result.price = total;
    return total;
}

struct PsoSetup {
    ModelCoefficients coeff;
    double sig, tau, v0, barrier, ln_k;
    double p1_max; // sqrt(2 (V0 - gamma)) / sigma
};

PsoSetup pso_setup(const MarketParams& mp, const StepOptionSpec& spec) {
    if (spec.kind != OptionKind::pso_up_out)
        throw ParameterError("pso: spec kind must be pso_up_out");
    validate_step_rate(mp, spec);
    PsoSetup s;
    s.coeff = model_coefficients(mp);
    s.sig = mp.vol;
    s.tau = spec.expiry;
    s.v0 = spec.knockout_rate;
    s.barrier = spec.upper_barrier;
    s.ln_k = spec.log_strike();
    s.p1_max = std::sqrt(2.0 * (s.v0 - s.coeff.gamma)) / s.sig;
    return s;
}

// Momentum-space integrand of the four region kernels, without the
// e^{-tau gamma} e^{alpha (x - x')} / (2 pi) prefactor.
double pso_band_integrand(int region, const PsoSetup& s, double x, double xp, double p1) {
    const double p2 = std::sqrt(std::max(2.0 * s.v0 / (s.sig * s.sig) - p1 * p1, 0.0));
    const double w = std::exp(-0.5 * s.tau * s.sig * s.sig * p1 * p1);
    const double s2v = s.sig * s.sig / s.v0;
    switch (region) {
    case 1: {
        const double phase = p1 * (x + xp - 2.0 * s.barrier);
        return w * (2.0 * std::cos(p1 * (x - xp)) + s2v * (p1 * p1 - p2 * p2) * std::cos(phase) -
                    2.0 * s2v * p1 * p2 * std::sin(phase));
    }
    case 2: {
        const double phase = p1 * (x - s.barrier);
        return w * 2.0 * s2v * (p1 * p1 * std::cos(phase) - p1 * p2 * std::sin(phase)) *
               std::exp(-p2 * (xp - s.barrier));
    }
    case 3: {
        const double phase = p1 * (xp - s.barrier);
        return w * 2.0 * s2v * (p1 * p1 * std::cos(phase) - p1 * p2 * std::sin(phase)) *
               std::exp(-p2 * (x - s.barrier));
    }
    case 4:
        return w * 2.0 * s2v * p1 * p1 * std::exp(-p2 * (x + xp - 2.0 * s.barrier));
    default:
        throw ContractError("pso_kernel: region must be 1..4");
    }
}

double pso_kernel_impl(int region, const PsoSetup& s, double x, double xp,
                       const QuadConfig& cfg, double* err_out = nullptr) {
    const double clip = cfg.endpoint_clip * s.p1_max;
    const double lo = clip;
    const double hi = s.p1_max - clip;
    auto f = [&](double p1) { return pso_band_integrand(region, s, x, xp, p1); };
    const QuadResult res = integrate(f, lo, hi, cfg);
    const double scale =
        std::exp(-s.tau * s.coeff.gamma) * std::exp(s.coeff.alpha * (x - xp)) / (2.0 * kPi);
    if (err_out)
        *err_out = std::fabs(scale) * res.err_estimate;
    return scale * res.value;
}

void check_region(int region, double x, double xp, double barrier) {
    bool ok = false;
    switch (region) {
    case 1: ok = x <= barrier && xp <= barrier; break;
    case 2: ok = x <= barrier && xp >= barrier; break;
    case 3: ok = x >= barrier && xp <= barrier; break;
    case 4: ok = x >= barrier && xp >= barrier; break;
    default: throw ContractError("pso_kernel: region must be 1..4");
    }
    if (!ok)
        throw ContractError("pso_kernel: coordinates inconsistent with the requested region");
}

} // namespace

ScatteringState scattering_state(const MarketParams& mp, double v0, double p1) {
    const ModelCoefficients coeff = model_coefficients(mp);
    if (!(v0 > coeff.gamma))
        throw ParameterError("scattering_state: requires V0 > gamma");
    const double p1_max = std::sqrt(2.0 * (v0 - coeff.gamma)) / mp.vol;
    if (!(p1 > 0.0 && p1 < p1_max))
        throw ParameterError("scattering_state: p1 outside (0, sqrt(2(V0-gamma))/sigma)");
    ScatteringState st;
    st.p1 = p1;
    st.p2 = std::sqrt(2.0 * v0 / (mp.vol * mp.vol) - p1 * p1);
    const std::complex<double> denom(p1, st.p2);
    st.a1 = std::complex<double>(p1, -st.p2) / denom;
    st.a2 = 2.0 * p1 / denom;
    return st;
}

double pso_kernel(int region, const MarketParams& mp, const StepOptionSpec& spec, double x,
                  double x_prime, const QuadConfig& cfg) {
    validate(cfg);
    const PsoSetup s = pso_setup(mp, spec);
    check_region(region, x, x_prime, s.barrier);
    return pso_kernel_impl(region, s, x, x_prime, cfg);
}

PricingResult pso_price(const MarketParams& mp, const StepOptionSpec& spec, LogSpot x,
                        const QuadConfig& cfg) {
    if (!(cfg.endpoint_clip > 0.0))
        throw DivergenceError("pso_price: momentum endpoint clip disabled; the above-barrier "
                              "payoff integral is marginally divergent");
    validate(cfg);
    const PsoSetup s = pso_setup(mp, spec);
    const double xv = x.value;
    const double x_cut =
        std::max(s.barrier, s.ln_k) + cfg.tail_sigmas * s.sig * std::sqrt(s.tau);

    QuadConfig inner = cfg;
    inner.rel_tol = 0.1 * cfg.rel_tol;
    inner.abs_tol = 0.1 * cfg.abs_tol;

    PricingResult result;
    result.diagnostics.p1_upper = s.p1_max * (1.0 - cfg.endpoint_clip);
    result.diagnostics.x_prime_cut = x_cut;

    const bool below = xv < s.barrier;
    const int region_in = below ? 1 : 3;
    const int region_out = below ? 2 : 4;

    auto payoff_kernel = [&](int region, double xp) {
        return pso_kernel_impl(region, s, xv, xp, inner) * (std::exp(xp) - spec.strike);
    };

    const QuadResult in_res = integrate(
        [&](double xp) { return payoff_kernel(region_in, xp); }, s.ln_k, s.barrier, cfg);
    const QuadResult out_res = integrate(
        [&](double xp) { return payoff_kernel(region_out, xp); }, s.barrier, x_cut, cfg);

    result.components.emplace_back(below ? "C1" : "C3", in_res.value);
    result.components.emplace_back(below ? "C2" : "C4", out_res.value);
    result.diagnostics.quadrature_error = in_res.err_estimate + out_res.err_estimate;

    // Mass dropped beyond x_cut: the integrand there decays no slower than
    // exp(-(p2_min + alpha - 1) x'), with p2_min set by the momentum clip.
    const double p1_hi = result.diagnostics.p1_upper;
    const double p2_min =
        std::sqrt(std::max(2.0 * s.v0 / (s.sig * s.sig) - p1_hi * p1_hi, 0.0));
    const double tail_decay = std::max(p2_min + s.coeff.alpha - 1.0, 1e-12);
    result.diagnostics.truncation_bound =
        std::fabs(payoff_kernel(region_out, x_cut)) / tail_decay;

    sum_components(result);
    return result;
}

PricingResult pdbs_price(const MarketParams& mp, const StepOptionSpec& spec, LogSpot x,
                         const QuadConfig& cfg, SpectrumChoice choice) {
    if (spec.kind != OptionKind::pdbs)
        throw ParameterError("pdbs_price: spec kind must be pdbs");
    validate(cfg);
    validate_step_rate(mp, spec);
    const ModelCoefficients coeff = model_coefficients(mp);
    const double a = spec.lower_barrier;
    const double b = spec.upper_barrier;
    const double ln_k = spec.log_strike();
    const double tau = spec.expiry;
    const double sig = mp.vol;
    const double xv = x.value;

    if (!(xv > a && xv < b))
        throw UnsupportedRegionError("pdbs_price: spot must lie strictly inside (a, b)");
    if (ln_k < a)
        throw UnsupportedRegionError(
            "pdbs_price: strikes below the lower barrier are not covered by the "
            "implemented price components");

    const WellGeometry geom(a, b, spec.knockout_rate, sig, coeff.gamma);
    if (bound_state_count(geom) < 1)
        throw NoBoundStateError("pdbs_price: the well supports no bound level");
    const std::vector<EigenMode> modes = build_spectrum(geom, choice);

    PricingResult result;
    result.components = {{"C1", 0.0}, {"C2", 0.0}, {"C3", 0.0},
                         {"C4", 0.0}, {"C5", 0.0}, {"C6", 0.0}};

    const double in_lo = std::min(std::max(ln_k, a), b);
    const double ext_lo = std::max(b, ln_k);
    double quad_err = 0.0;
    double trunc = 0.0;

    for (const EigenMode& mode : modes) {
        result.diagnostics.mode_wavenumbers.push_back(mode.k1);
        const double weight = std::exp(-0.5 * tau * sig * sig * mode.k1 * mode.k1);
        if (weight < 1e-300)
            continue;
        auto phi = [&](double u) { return eval_wavefunction(mode, geom, u); };

        const double tail_len = std::log(1.0 / kExteriorMassCut) / (2.0 * mode.k2);
        const QuadResult w_left =
            integrate([&](double u) { const double p = phi(u); return p * p; },
                      a - tail_len, a, cfg);
        const QuadResult w_in =
            integrate([&](double u) { const double p = phi(u); return p * p; }, a, b, cfg);
        const QuadResult w_right =
            integrate([&](double u) { const double p = phi(u); return p * p; },
                      b, b + tail_len, cfg);

        auto payoff_phi = [&](double xp) {
            return std::exp(-coeff.alpha * xp) * (std::exp(xp) - spec.strike) * phi(xp);
        };
        QuadResult in_int{0.0, 0.0, 0};
        if (in_lo < b)
            in_int = integrate(payoff_phi, in_lo, b, cfg);
        const double ext_hi =
            b + std::max(tail_len, cfg.tail_sigmas * sig * std::sqrt(tau));
        QuadResult ext_int{0.0, 0.0, 0};
        if (ext_lo < ext_hi)
            ext_int = integrate(payoff_phi, ext_lo, ext_hi, cfg);

        const double base = weight * phi(xv);
        result.components[0].second += base * w_left.value * in_int.value;
        result.components[1].second += base * w_left.value * ext_int.value;
        result.components[2].second += base * w_in.value * in_int.value;
        result.components[3].second += base * w_in.value * ext_int.value;
        result.components[4].second += base * w_right.value * in_int.value;
        result.components[5].second += base * w_right.value * ext_int.value;

        const double payoff_scale = std::fabs(in_int.value) + std::fabs(ext_int.value);
        quad_err += std::fabs(base) *
                    (w_left.err_estimate + w_in.err_estimate + w_right.err_estimate) *
                        payoff_scale +
                    std::fabs(base) * (in_int.err_estimate + ext_int.err_estimate);
        // dropped exterior x'' mass plus the x' tail beyond ext_hi
        const double x_tail_decay = std::max(mode.k2 + coeff.alpha - 1.0, 1e-12);
        trunc += std::fabs(base) * (kExteriorMassCut * payoff_scale +
                                    std::fabs(payoff_phi(ext_hi)) / x_tail_decay);
    }

    const double scale = std::exp(-tau * coeff.gamma) * std::exp(coeff.alpha * xv);
    for (auto& [label, value] : result.components)
        value *= scale;
    result.diagnostics.quadrature_error = scale * quad_err;
    result.diagnostics.truncation_bound = scale * trunc;
    result.diagnostics.x_prime_cut =
        b + std::max(std::log(1.0 / kExteriorMassCut) / (2.0 * modes.back().k2),
                     cfg.tail_sigmas * sig * std::sqrt(tau));
    sum_components(result);
    return result;
}

double delta(const MarketParams& mp, const StepOptionSpec& spec, LogSpot x,
             const QuadConfig& cfg, SpectrumChoice choice) {
    constexpr double h = 1e-3;
    auto price_at = [&](double xv) -> double {
        const LogSpot pt(xv);
        switch (spec.kind) {
        case OptionKind::vanilla:
            return bs_call_closed(mp, pt.price(), spec.strike, spec.expiry);
        case OptionKind::pso_up_out:
            return pso_price(mp, spec, pt, cfg).price;
        case OptionKind::pdbs:
            return pdbs_price(mp, spec, pt, cfg, choice).price;
        case OptionKind::uosb:
            return uosb_price(mp, pt, spec, cfg);
        case OptionKind::sdb:
            return sdb_price(mp, pt, spec, cfg);
        }
        throw ParameterError("delta: unknown option kind");
    };
    const double up = price_at(x.value + h);
    const double down = price_at(x.value - h);
    return std::exp(-x.value) * (up - down) / (2.0 * h);
}

} // namespace stepwell
