#include "stepwell/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace stepwell {

namespace {

constexpr double kPi = 3.14159265358979323846;

double quantization_residual(double k, double beta, double half_width, int n) {
    const double ratio = std::min(k / beta, 1.0);
    return k * half_width + std::asin(ratio) - 0.5 * n * kPi;
}

EigenMode finish_mode(const WellGeometry& geom, int n, double k1, ModeProvenance prov) {
    EigenMode m;
    m.n = n;
    m.k1 = k1;
    const double two_v0 = 2.0 * geom.v0 / (geom.vol * geom.vol);
    m.k2 = std::sqrt(std::max(two_v0 - k1 * k1, 0.0));
    m.parity = (n % 2 == 0) ? Parity::antisymmetric : Parity::symmetric;
    m.provenance = prov;
    const double w = geom.width();
    m.a_in = std::sqrt(2.0 * m.k2 / (m.k2 * w + 2.0));
    const double phase = 0.5 * k1 * w;
    const double edge = (m.parity == Parity::antisymmetric) ? std::sin(phase) : std::cos(phase);
    m.a_out = m.a_in * edge * std::exp(0.5 * m.k2 * w);
    return m;
}

void check_level(const WellGeometry& geom, int n) {
    if (n < 1)
        throw ParameterError("spectrum: level index must be >= 1");
    if (n > bound_state_count(geom))
        throw ParameterError("spectrum: level index exceeds the number of bound states");
}

} // namespace

WellGeometry::WellGeometry(double lower_, double upper_, double v0_, double vol_, double gamma_)
    : lower(lower_), upper(upper_), v0(v0_), vol(vol_), gamma(gamma_) {
    if (!(lower < upper))
        throw ParameterError("WellGeometry: requires a < b");
    if (!(vol > 0.0))
        throw ParameterError("WellGeometry: requires vol > 0");
    if (!(v0 > gamma))
        throw ParameterError("WellGeometry: requires V0 > gamma");
    if (!(gamma >= 0.0))
        throw ParameterError("WellGeometry: requires gamma >= 0");
}

double WellGeometry::beta() const { return std::sqrt(2.0 * v0) / vol; }

double WellGeometry::top_wavenumber_sq() const {
    const double b = beta();
    return b * b - 2.0 * gamma / (vol * vol);
}

int bound_state_count(const WellGeometry& geom) {
    const double top_sq = geom.top_wavenumber_sq();
    if (!(top_sq > 0.0))
        throw NoBoundStateError("bound_state_count: beta^2 <= 2 gamma / sigma^2");
    return static_cast<int>(std::floor(geom.width() / kPi * std::sqrt(top_sq)));
}

EigenMode exact_mode(const WellGeometry& geom, int n) {
    check_level(geom, n);
    const double beta = geom.beta();
    const double w = geom.width();
    const double half = 0.5 * w;
    double lo = (n - 1) * kPi / w;
    double hi = std::min(n * kPi / w, beta);
    double flo = quantization_residual(lo, beta, half, n);
    double fhi = quantization_residual(hi, beta, half, n);
    if (!(flo < 0.0 && fhi > 0.0))
        throw ContractError("exact_mode: quantization bracket does not straddle a root");
    double mid = lo, fmid = flo;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        mid = 0.5 * (lo + hi);
        if (!(lo < mid && mid < hi))
            break;
        fmid = quantization_residual(mid, beta, half, n);
        if (fmid < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (std::fabs(quantization_residual(root, beta, half, n)) > 1e-12)
        throw ContractError("exact_mode: bisection residual above 1e-12");
    return finish_mode(geom, n, root, ModeProvenance::exact);
}

double approx_low_wavenumber(const WellGeometry& geom, int n) {
    const double beta = geom.beta();
    return beta * n * kPi / (beta * geom.width() + 2.0);
}

double approx_high_wavenumber(const WellGeometry& geom, int n) {
    const double beta = geom.beta();
    const double w = geom.width();
    const double arg = 2.0 - 2.0 * (n - 1) * kPi / (beta * w);
    if (arg < 0.0)
        throw ApproximationDomainError("approx_high_wavenumber: negative square-root argument");
    return 2.0 / w * (0.5 * (n - 1) * kPi + std::sqrt(arg));
}

double approx_low_rel_error(const WellGeometry& geom, int n) {
    if (n < 1)
        throw ParameterError("approx_low_rel_error: level index must be >= 1");
    const double beta = geom.beta();
    const double bw2 = beta * geom.width() + 2.0;
    return n * n * kPi * kPi / (6.0 * beta * bw2 * bw2);
}

EigenMode approx_mode_low(const WellGeometry& geom, int n) {
    check_level(geom, n);
    return finish_mode(geom, n, approx_low_wavenumber(geom, n), ModeProvenance::low_approx);
}

EigenMode approx_mode_high(const WellGeometry& geom, int n) {
    check_level(geom, n);
    if (n < 2)
        throw ApproximationDomainError("approx_mode_high: defined for n >= 2 only");
    return finish_mode(geom, n, approx_high_wavenumber(geom, n), ModeProvenance::high_approx);
}

ErrorFormulaValues error_formulas(const WellGeometry& geom, int n) {
    check_level(geom, n);
    if (n < 2)
        throw ApproximationDomainError("error_formulas: high-energy error undefined at n = 1");
    ErrorFormulaValues e;
    e.low = approx_low_rel_error(geom, n);
    const double arg = 2.0 - 2.0 * (n - 1) * kPi / (geom.beta() * geom.width());
    e.high = std::pow(std::max(arg, 0.0), 1.5) / (12.0 * (n - 1) * kPi);
    return e;
}

double approx_high_abs_error(const WellGeometry& geom, int n) {
    check_level(geom, n);
    const double arg = 2.0 - 2.0 * (n - 1) * kPi / (geom.beta() * geom.width());
    return std::pow(std::max(arg, 0.0), 1.5) / (12.0 * geom.width());
}

SpectrumPartition partition(const WellGeometry& geom) {
    SpectrumPartition p;
    p.n_max = bound_state_count(geom);
    p.m_max1 = p.n_max / 2;
    p.m_max2 = (p.n_max + 1) / 2;
    p.assignment.resize(static_cast<std::size_t>(p.n_max), ModeProvenance::low_approx);
    for (int n = 1; n <= p.n_max; ++n) {
        const bool high = (n == p.n_max && n >= 2);
        if (high)
            p.assignment[static_cast<std::size_t>(n - 1)] = ModeProvenance::high_approx;
        const bool sine_family = (n % 2 == 0);
        if (!high) {
            if (sine_family)
                ++p.m1;
            else
                ++p.m2;
        }
    }
    return p;
}

std::vector<EigenMode> build_spectrum(const WellGeometry& geom, SpectrumChoice choice) {
    const int nm = bound_state_count(geom);
    std::vector<EigenMode> modes;
    modes.reserve(static_cast<std::size_t>(nm));
    if (choice == SpectrumChoice::exact) {
        for (int n = 1; n <= nm; ++n)
            modes.push_back(exact_mode(geom, n));
        return modes;
    }
    const SpectrumPartition p = partition(geom);
    for (int n = 1; n <= nm; ++n) {
        if (p.assignment[static_cast<std::size_t>(n - 1)] == ModeProvenance::high_approx)
            modes.push_back(approx_mode_high(geom, n));
        else
            modes.push_back(approx_mode_low(geom, n));
    }
    return modes;
}

double eval_wavefunction(const EigenMode& mode, const WellGeometry& geom, double x) {
    const double u = x - geom.center();
    if (x > geom.upper)
        return mode.a_out * std::exp(-mode.k2 * u);
    if (x < geom.lower) {
        const double sign = (mode.parity == Parity::antisymmetric) ? -1.0 : 1.0;
        return sign * mode.a_out * std::exp(mode.k2 * u);
    }
    return (mode.parity == Parity::antisymmetric) ? mode.a_in * std::sin(mode.k1 * u)
                                                  : mode.a_in * std::cos(mode.k1 * u);
}

} // namespace stepwell
