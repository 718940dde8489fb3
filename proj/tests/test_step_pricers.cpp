#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stepwell/baseline_pricers.hpp"
#include "stepwell/step_pricers.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace stepwell;

namespace {
const MarketParams kMp(0.05, 0.3);
const QuadConfig kCfg{};
const double kLower = std::log(90.0);
const double kUpper = std::log(130.0);

StepOptionSpec pso_spec(double v0, double strike = 100.0) {
    return StepOptionSpec::pso(strike, 1.0, kUpper, v0);
}
StepOptionSpec pdbs_spec(double v0, double strike = 100.0) {
    return StepOptionSpec::pdbs(strike, 1.0, kLower, kUpper, v0);
}
} // namespace

TEST_CASE("scattering coefficients") {
    // p1 -> 0: total reflection
    const ScatteringState tiny = scattering_state(kMp, 55.0, 1e-9);
    CHECK(std::abs(tiny.a2) < 1e-8);
    CHECK(std::abs(tiny.a1 - std::complex<double>(-1.0, 0.0)) < 1e-8);

    // p1 = p2 gives a1 = (1-i)/(1+i) = -i
    const double p_equal = std::sqrt(55.0) / 0.3;
    const ScatteringState sym = scattering_state(kMp, 55.0, p_equal);
    CHECK(std::abs(sym.a1 - std::complex<double>(0.0, -1.0)) < 1e-12);

    for (double p1 : {0.5, 3.0, 10.0, 20.0, 33.0}) {
        const ScatteringState st = scattering_state(kMp, 55.0, p1);
        CHECK(std::abs(st.a1) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(st.p1 * st.p1 + st.p2 * st.p2 ==
              doctest::Approx(2.0 * 55.0 / (0.3 * 0.3)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(scattering_state(kMp, 55.0, -1.0), ParameterError);
    CHECK_THROWS_AS(scattering_state(kMp, 55.0, 40.0), ParameterError);
    CHECK_THROWS_AS(scattering_state(kMp, 0.01, 0.1), ParameterError);
}

TEST_CASE("pso kernel pieces") {
    const StepOptionSpec spec = pso_spec(55.0);
    const double x = 4.605;

    // region 2 value against a dense-trapezoid re-evaluation
    const double xp = kUpper + 0.1;
    const double kernel2 = pso_kernel(2, kMp, spec, x, xp, kCfg);
    CHECK(kernel2 > 0.0);
    {
        const ModelCoefficients mc = model_coefficients(kMp);
        const double sig = kMp.vol;
        const double v0 = 55.0;
        const double p1max = std::sqrt(2.0 * (v0 - mc.gamma)) / sig;
        const double eps = kCfg.endpoint_clip * p1max;
        auto band = [&](double p1) {
            const double p2 = std::sqrt(2.0 * v0 / (sig * sig) - p1 * p1);
            const double w = std::exp(-0.5 * spec.expiry * sig * sig * p1 * p1);
            return w * 2.0 * (sig * sig / v0) *
                   (p1 * p1 * std::cos(p1 * (x - kUpper)) -
                    p1 * p2 * std::sin(p1 * (x - kUpper))) *
                   std::exp(-p2 * (xp - kUpper));
        };
        const double brute = testing::trapezoid(band, eps, p1max - eps, 200001) *
                             std::exp(-spec.expiry * mc.gamma) *
                             std::exp(mc.alpha * (x - xp)) / (2.0 * 3.14159265358979323846);
        CHECK(kernel2 == doctest::Approx(brute).epsilon(1e-7));
    }

    // region 1 is symmetric apart from the drift tilt
    const double k_ab = pso_kernel(1, kMp, spec, 4.55, 4.70, kCfg);
    const double k_ba = pso_kernel(1, kMp, spec, 4.70, 4.55, kCfg);
    const ModelCoefficients mc = model_coefficients(kMp);
    CHECK(k_ab * std::exp(-mc.alpha * (4.55 - 4.70)) ==
          doctest::Approx(k_ba * std::exp(-mc.alpha * (4.70 - 4.55))).epsilon(1e-9));

    // region 4 kernel is positive above the barrier
    for (double dx : {0.01, 0.1, 0.3})
        for (double dxp : {0.02, 0.2})
            CHECK(pso_kernel(4, kMp, spec, kUpper + dx, kUpper + dxp, kCfg) > 0.0);

    // region/coordinate mismatches
    CHECK_THROWS_AS(pso_kernel(1, kMp, spec, x, kUpper + 0.5, kCfg), ContractError);
    CHECK_THROWS_AS(pso_kernel(4, kMp, spec, x, kUpper + 0.5, kCfg), ContractError);
    CHECK_THROWS_AS(pso_kernel(7, kMp, spec, x, x, kCfg), ContractError);
}

TEST_CASE("randomized scattering states keep their invariants") {
    std::uint64_t state = 0x2545f491u;
    auto pick = [&](double lo, double hi) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return lo + (hi - lo) * ((state >> 11) * (1.0 / 9007199254740992.0));
    };
    for (int trial = 0; trial < 200; ++trial) {
        const double vol = pick(0.1, 0.8);
        const double rate = pick(0.0, 0.1);
        const MarketParams mp(rate, vol);
        const double gamma = model_coefficients(mp).gamma;
        const double v0 = gamma + pick(1.0, 150.0);
        const double p1_max = std::sqrt(2.0 * (v0 - gamma)) / vol;
        const double p1 = pick(1e-6, 1.0 - 1e-6) * p1_max;
        const ScatteringState st = scattering_state(mp, v0, p1);
        CHECK(std::abs(st.a1) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(st.p1 * st.p1 + st.p2 * st.p2 ==
              doctest::Approx(2.0 * v0 / (vol * vol)).epsilon(1e-13));
        CHECK(st.p2 > std::sqrt(2.0 * gamma) / vol);
        // matching at the barrier: 1 + a1 = a2
        CHECK(std::abs(1.0 + st.a1 - st.a2) < 1e-13);
    }
}

TEST_CASE("pso price at the reference parameters") {
    // values pinned by the Monte Carlo oracle and an independent dense-grid
    // evaluation during development
    const double p55 = pso_price(kMp, pso_spec(55.0), LogSpot::from_price(110.0), kCfg).price;
    const double p26 = pso_price(kMp, pso_spec(26.0), LogSpot::from_price(110.0), kCfg).price;
    const double p13 = pso_price(kMp, pso_spec(13.0), LogSpot::from_price(110.0), kCfg).price;
    CHECK(p55 == doctest::Approx(1.830212).epsilon(2e-5));
    CHECK(p26 == doctest::Approx(2.244025).epsilon(2e-5));
    CHECK(p13 == doctest::Approx(2.948553).epsilon(2e-5));

    const PricingResult res = pso_price(kMp, pso_spec(55.0), LogSpot::from_price(110.0), kCfg);
    REQUIRE(res.components.size() == 2);
    CHECK(res.components[0].first == "C1");
    CHECK(res.components[1].first == "C2");
    CHECK(res.price == res.components[0].second + res.components[1].second);
    CHECK(res.components[0].second == doctest::Approx(1.704102).epsilon(1e-4));
    CHECK(res.components[1].second == doctest::Approx(0.126110).epsilon(1e-4));
    CHECK(res.diagnostics.truncation_bound < 1e-6);
}

TEST_CASE("pso price above the barrier joins continuously") {
    const StepOptionSpec spec = pso_spec(55.0);
    const PricingResult above =
        pso_price(kMp, spec, LogSpot::from_price(130.5), kCfg);
    REQUIRE(above.components.size() == 2);
    CHECK(above.components[0].first == "C3");
    CHECK(above.components[1].first == "C4");
    CHECK(above.price > 0.0);

    const double below = pso_price(kMp, spec, LogSpot(kUpper - 1e-4), kCfg).price;
    const double at = pso_price(kMp, spec, LogSpot(kUpper + 1e-4), kCfg).price;
    const double slope = (pso_price(kMp, spec, LogSpot(kUpper - 1e-2), kCfg).price - below) /
                         (1e-2 - 1e-4);
    CHECK(std::fabs(at - below) < 3.0 * std::fabs(slope) * 2e-4 + 1e-6);
}

TEST_CASE("pso price guards") {
    CHECK_THROWS_AS(
        pso_price(kMp, pso_spec(0.01), LogSpot::from_price(110.0), kCfg),
        ParameterError); // V0 <= gamma
    QuadConfig no_clip = kCfg;
    no_clip.endpoint_clip = 0.0;
    CHECK_THROWS_AS(pso_price(kMp, pso_spec(55.0), LogSpot::from_price(110.0), no_clip),
                    DivergenceError);
}

TEST_CASE("pso price is bounded by the vanilla price") {
    for (double s : {95.0, 110.0, 125.0})
        for (double v0 : {13.0, 55.0, 100.0}) {
            const double step =
                pso_price(kMp, pso_spec(v0), LogSpot::from_price(s), kCfg).price;
            CHECK(step <= bs_call_closed(kMp, s, 100.0, 1.0) + 1e-8);
            CHECK(step >= 0.0);
        }
}

TEST_CASE("pdbs price at the reference parameters") {
    const LogSpot x = LogSpot::from_price(110.0);
    const PricingResult exact =
        pdbs_price(kMp, pdbs_spec(55.0), x, kCfg, SpectrumChoice::exact);
    const PricingResult mixed =
        pdbs_price(kMp, pdbs_spec(55.0), x, kCfg, SpectrumChoice::mixed_approx);
    CHECK(exact.price == doctest::Approx(1.040795).epsilon(2e-5));
    CHECK(mixed.price == doctest::Approx(1.033101).epsilon(2e-5));
    CHECK(std::fabs(exact.price - mixed.price) / exact.price < 0.01);

    REQUIRE(exact.components.size() == 6);
    double sum = 0.0;
    for (const auto& [label, value] : exact.components)
        sum += value;
    CHECK(exact.price == sum);
    CHECK(exact.diagnostics.mode_wavenumbers.size() == 4);
}

TEST_CASE("pdbs strike edge cases") {
    const LogSpot x = LogSpot::from_price(110.0);
    // strike at the lower barrier is the lowest supported strike
    const double at_lower =
        pdbs_price(kMp, pdbs_spec(55.0, 90.0), x, kCfg, SpectrumChoice::exact).price;
    const double at_100 =
        pdbs_price(kMp, pdbs_spec(55.0, 100.0), x, kCfg, SpectrumChoice::exact).price;
    CHECK(at_lower == doctest::Approx(1.979752).epsilon(5e-5));
    CHECK(at_lower > at_100);

    // strike above the upper barrier: only the above-well components remain
    const PricingResult high_strike =
        pdbs_price(kMp, pdbs_spec(55.0, 135.0), x, kCfg, SpectrumChoice::exact);
    CHECK(high_strike.components[0].second == 0.0); // C1
    CHECK(high_strike.components[2].second == 0.0); // C3
    CHECK(high_strike.components[4].second == 0.0); // C5
    CHECK(high_strike.price > 0.0);
    CHECK(high_strike.price < at_100);

    // strike below the lower barrier is not covered by the formulas
    CHECK_THROWS_AS(pdbs_price(kMp, pdbs_spec(55.0, 85.0), x, kCfg), UnsupportedRegionError);
}

TEST_CASE("pdbs spot and depth guards") {
    CHECK_THROWS_AS(pdbs_price(kMp, pdbs_spec(55.0), LogSpot::from_price(89.0), kCfg),
                    UnsupportedRegionError);
    CHECK_THROWS_AS(pdbs_price(kMp, pdbs_spec(55.0), LogSpot::from_price(131.0), kCfg),
                    UnsupportedRegionError);
    CHECK_THROWS_AS(pdbs_price(kMp, pdbs_spec(0.01), LogSpot::from_price(110.0), kCfg),
                    ParameterError);
    // a well barely deeper than gamma holds no level
    const ModelCoefficients mc = model_coefficients(kMp);
    CHECK_THROWS_AS(pdbs_price(kMp, pdbs_spec(mc.gamma + 1e-6), LogSpot::from_price(110.0),
                               kCfg),
                    NoBoundStateError);
}

TEST_CASE("step prices sandwich between barrier and vanilla prices") {
    const StepOptionSpec uo = StepOptionSpec::uosb(100.0, 1.0, kUpper);
    const StepOptionSpec db = StepOptionSpec::sdb(100.0, 1.0, kLower, kUpper);
    for (double s : {95.0, 110.0, 125.0}) {
        const LogSpot x = LogSpot::from_price(s);
        const double vanilla = bs_call_closed(kMp, s, 100.0, 1.0);
        const double uosb = uosb_price(kMp, x, uo, kCfg);
        const double sdb = sdb_price(kMp, x, db, kCfg);
        const double slack = 1e-4 * s;
        for (double v0 : {13.0, 55.0}) {
            const double pso = pso_price(kMp, pso_spec(v0), x, kCfg).price;
            const double pdbs =
                pdbs_price(kMp, pdbs_spec(v0), x, kCfg, SpectrumChoice::exact).price;
            CHECK(pso >= uosb - slack);
            CHECK(pso <= vanilla + slack);
            CHECK(pdbs >= sdb - slack);
            CHECK(pdbs <= vanilla + slack);
        }
    }
}

TEST_CASE("step prices are monotone in V0 and strike") {
    const LogSpot x = LogSpot::from_price(110.0);
    double prev_pso = 1e300, prev_pdbs = 1e300;
    for (double v0 : {13.0, 26.0, 55.0, 100.0}) {
        const double pso = pso_price(kMp, pso_spec(v0), x, kCfg).price;
        const double pdbs = pdbs_price(kMp, pdbs_spec(v0), x, kCfg).price;
        CHECK(pso < prev_pso);
        CHECK(pdbs < prev_pdbs);
        prev_pso = pso;
        prev_pdbs = pdbs;
    }
    prev_pso = prev_pdbs = 1e300;
    for (double strike : {90.0, 100.0, 110.0, 120.0}) {
        const double pso = pso_price(kMp, pso_spec(55.0, strike), x, kCfg).price;
        const double pdbs =
            pdbs_price(kMp, pdbs_spec(55.0, strike), x, kCfg, SpectrumChoice::exact).price;
        CHECK(pso < prev_pso);
        CHECK(pdbs < prev_pdbs);
        prev_pso = pso;
        prev_pdbs = pdbs;
    }
}

TEST_CASE("approach to the hard-barrier limits scales as 1/sqrt(V0)") {
    // the sub-barrier basis converges to the absorbing-barrier kernel with a
    // reflection-coefficient correction of order sqrt(E/V0); the measured
    // gaps pin that rate
    const LogSpot x = LogSpot::from_price(110.0);
    const double uosb =
        uosb_price(kMp, x, StepOptionSpec::uosb(100.0, 1.0, kUpper), kCfg);
    const double sdb =
        sdb_price(kMp, x, StepOptionSpec::sdb(100.0, 1.0, kLower, kUpper), kCfg);

    const double gap_pso_1e4 =
        (pso_price(kMp, pso_spec(1e4), x, kCfg).price - uosb) / uosb;
    const double gap_pso_4e4 =
        (pso_price(kMp, pso_spec(4e4), x, kCfg).price - uosb) / uosb;
    CHECK(gap_pso_1e4 == doctest::Approx(0.0330).epsilon(0.1));
    CHECK(gap_pso_4e4 == doctest::Approx(0.5 * gap_pso_1e4).epsilon(0.05));

    const double gap_pdbs_1e4 =
        (pdbs_price(kMp, pdbs_spec(1e4), x, kCfg, SpectrumChoice::exact).price - sdb) / sdb;
    const double gap_pdbs_4e4 =
        (pdbs_price(kMp, pdbs_spec(4e4), x, kCfg, SpectrumChoice::exact).price - sdb) / sdb;
    CHECK(gap_pdbs_1e4 == doctest::Approx(0.0817).epsilon(0.1));
    CHECK(gap_pdbs_4e4 == doctest::Approx(0.5 * gap_pdbs_1e4).epsilon(0.06));
}

TEST_CASE("delta") {
    const QuadConfig cfg = kCfg;
    // vanilla finite difference matches N(d+)
    const double s = 110.0;
    const double st = kMp.vol;
    const double d_plus = (std::log(s / 100.0) + (kMp.rate + 0.5 * st * st)) / st;
    const double fd =
        delta(kMp, StepOptionSpec::vanilla(100.0, 1.0), LogSpot::from_price(s), cfg);
    CHECK(std::fabs(fd - normal_cdf(d_plus)) < 1e-4);

    // deep out-of-the-money step delta vanishes
    const double far = delta(kMp, pso_spec(55.0), LogSpot::from_price(20.0), cfg);
    CHECK(std::fabs(far) < 1e-4);

    // delta ordering in V0 at mid-grid, matching the published curves
    double prev_pso = 1e300, prev_pdbs = 1e300;
    for (double v0 : {13.0, 26.0, 55.0}) {
        const double dp = delta(kMp, pso_spec(v0), LogSpot::from_price(100.0), cfg);
        const double dd = delta(kMp, pdbs_spec(v0), LogSpot::from_price(100.0), cfg);
        CHECK(std::isfinite(dp));
        CHECK(std::isfinite(dd));
        CHECK(dp < prev_pso);
        CHECK(dd < prev_pdbs);
        prev_pso = dp;
        prev_pdbs = dd;
    }

    // step delta sits between the barrier and vanilla deltas
    const double d_uosb =
        delta(kMp, StepOptionSpec::uosb(100.0, 1.0, kUpper), LogSpot::from_price(100.0), cfg);
    const double d_vanilla =
        delta(kMp, StepOptionSpec::vanilla(100.0, 1.0), LogSpot::from_price(100.0), cfg);
    const double d_step = delta(kMp, pso_spec(55.0), LogSpot::from_price(100.0), cfg);
    CHECK(d_step >= std::min(d_uosb, d_vanilla) - 1e-9);
    CHECK(d_step <= std::max(d_uosb, d_vanilla) + 1e-9);
}
