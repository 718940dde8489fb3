#include "stepwell/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace stepwell {

namespace {

// 15-point Kronrod abscissae with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.10479001032225018, 0.14065325971552592,
    0.16900472663926790, 0.19035057806478542, 0.20443294007529889, 0.20948214108472783};
constexpr double kWg[4] = {
    0.12948496616886969, 0.27970539148927664, 0.38183005050511894, 0.41795918367346939};

struct Segment {
    double lo, hi;
    double value;
    double err;
};

Segment gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double f_mid = f(mid);
    double resg = kWg[3] * f_mid;
    double resk = kWgk[7] * f_mid;
    double resabs = std::fabs(resk);
    double fv[15];
    fv[7] = f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        fv[i] = f1;
        fv[14 - i] = f2;
        const double sum = f1 + f2;
        resk += kWgk[i] * sum;
        resabs += kWgk[i] * (std::fabs(f1) + std::fabs(f2));
        if (i % 2 == 1) // Kronrod points 1,3,5 carry the Gauss nodes
            resg += kWg[i / 2] * sum;
    }

    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(f_mid - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::fabs(fv[i] - reskh) + std::fabs(fv[14 - i] - reskh));

    const double value = resk * half;
    resasc *= std::fabs(half);
    resabs *= std::fabs(half);
    double err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps))
        err = std::max(eps * 50.0 * resabs, err);

    if (!std::isfinite(value))
        throw ParameterError("integrate: integrand not finite on the interval");
    return {lo, hi, value, err};
}

} // namespace

void validate(const QuadConfig& cfg) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
        throw ParameterError("QuadConfig: tolerances must be > 0");
    if (cfg.max_subdivisions < 1)
        throw ParameterError("QuadConfig: max_subdivisions must be >= 1");
    if (!(cfg.endpoint_clip > 0.0 && cfg.endpoint_clip <= 1e-2))
        throw ParameterError("QuadConfig: endpoint_clip must lie in (0, 1e-2]");
    if (!(cfg.tail_sigmas > 0.0))
        throw ParameterError("QuadConfig: tail_sigmas must be > 0");
}

QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     const QuadConfig& cfg) {
    validate(cfg);
    if (!(lo < hi))
        throw ParameterError("integrate: requires lo < hi");

    std::vector<Segment> segs;
    segs.reserve(64);
    segs.push_back(gk15(f, lo, hi));

    int splits = 0;
    for (;;) {
        double total = 0.0, total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            total_err += segs[i].err;
            if (segs[i].err > segs[worst].err)
                worst = i;
        }
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
        if (total_err <= tol)
            return {total, total_err, splits};
        if (splits >= cfg.max_subdivisions)
            throw QuadratureError("integrate: tolerance not reached after " +
                                      std::to_string(splits) + " subdivisions",
                                  total, total_err);
        const Segment s = segs[worst];
        const double mid = 0.5 * (s.lo + s.hi);
        if (!(s.lo < mid && mid < s.hi)) {
            // interval exhausted at machine precision; accept what we have
            return {total, total_err, splits};
        }
        segs[worst] = gk15(f, s.lo, mid);
        segs.push_back(gk15(f, mid, s.hi));
        ++splits;
    }
}

QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double lo,
                                   double decay_rate, const QuadConfig& cfg) {
    validate(cfg);
    if (!(decay_rate > 0.0))
        throw DivergenceError("integrate_semi_infinite: decay_rate must be > 0 "
                              "(marginally convergent integrand; pre-truncate instead)");
    const double width = std::max(50.0, cfg.tail_sigmas) / decay_rate;
    const double hi = lo + width;
    QuadResult r = integrate(f, lo, hi, cfg);
    const double tail_bound = std::fabs(f(hi)) / decay_rate;
    r.err_estimate += tail_bound;
    return r;
}

} // namespace stepwell
