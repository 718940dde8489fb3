#pragma once

#include "stepwell/core.hpp"
#include "stepwell/quadrature.hpp"
#include "stepwell/spectrum.hpp"

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace stepwell {

/// Sub-barrier scattering solution of the step potential: oscillatory below
/// the barrier with wavenumber p1, decaying above with rate p2, matched at
/// the barrier by the reflection/transmission coefficients a1, a2.
struct ScatteringState {
    double p1 = 0.0;
    double p2 = 0.0;
    std::complex<double> a1; // reflection, unimodular
    std::complex<double> a2; // transmission into the decaying region
};

ScatteringState scattering_state(const MarketParams& mp, double v0, double p1);

struct PricingDiagnostics {
    double quadrature_error = 0.0; // accumulated outer-integral estimates
    double truncation_bound = 0.0; // bound on mass dropped by the x'/momentum cuts
    double p1_upper = 0.0;         // clipped upper momentum limit (PSO)
    double x_prime_cut = 0.0;      // upper x' truncation actually used
    std::vector<double> mode_wavenumbers; // k1 per mode (PDBS)
};

/// Price plus its labeled partial prices. The price is the ordered sum of
/// the components, bit-for-bit.
struct PricingResult {
    double price = 0.0;
    std::vector<std::pair<std::string, double>> components;
    PricingDiagnostics diagnostics;
};

/// Proportional-step pricing kernel for one of the four (x, x') regions
/// relative to the barrier: 1 = both below, 2 = x below/x' above,
/// 3 = x above/x' below, 4 = both above. Momentum integral over the
/// sub-barrier band, clipped at both endpoints by cfg.endpoint_clip.
double pso_kernel(int region, const MarketParams& mp, const StepOptionSpec& spec, double x,
                  double x_prime, const QuadConfig& cfg);

/// Proportional step call price: C1 + C2 below the barrier, C3 + C4 above.
/// The above-barrier payoff integral is truncated at
/// max(B, ln K) + tail_sigmas * sigma * sqrt(tau).
PricingResult pso_price(const MarketParams& mp, const StepOptionSpec& spec, LogSpot x,
                        const QuadConfig& cfg);

/// Proportional double-barrier step call price: six components indexed by
/// (x' in-well / above-well) x (x'' left / in-well / right), summed over the
/// bound spectrum. Requires a < x < b and ln K >= a; ln K above b leaves the
/// in-well payoff components empty.
PricingResult pdbs_price(const MarketParams& mp, const StepOptionSpec& spec, LogSpot x,
                         const QuadConfig& cfg,
                         SpectrumChoice choice = SpectrumChoice::mixed_approx);

/// Spot sensitivity via the log-space central difference
/// e^{-x} (C(x+h) - C(x-h)) / (2h), h = 1e-3.
double delta(const MarketParams& mp, const StepOptionSpec& spec, LogSpot x,
             const QuadConfig& cfg, SpectrumChoice choice = SpectrumChoice::mixed_approx);

} // namespace stepwell
