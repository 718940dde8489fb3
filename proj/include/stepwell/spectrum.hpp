#pragma once

#include "stepwell/core.hpp"

#include <vector>

namespace stepwell {

/// Finite symmetric square well in log-price coordinates: depth v0 outside
/// (lower, upper), zero inside, on top of the energy shift gamma.
struct WellGeometry {
    double lower = 0.0; // a
    double upper = 0.0; // b
    double v0 = 0.0;
    double vol = 0.0;
    double gamma = 0.0;

    WellGeometry(double lower_, double upper_, double v0_, double vol_, double gamma_);

    double width() const { return upper - lower; }
    double center() const { return 0.5 * (lower + upper); }
    /// beta = sqrt(2 V0)/sigma, the wavenumber scale of the well depth.
    double beta() const;
    /// Squared wavenumber at which the mode energy reaches V0.
    double top_wavenumber_sq() const;
};

enum class Parity {
    symmetric,     // cosine family, odd level index
    antisymmetric, // sine family, even level index
};

enum class ModeProvenance { exact, low_approx, high_approx };

/// One bound level of the well. k1 is the interior wavenumber, k2 the
/// exterior decay rate; k1^2 + k2^2 = 2 V0 / sigma^2 holds by construction.
struct EigenMode {
    int n = 0; // 1-based level index
    double k1 = 0.0;
    double k2 = 0.0;
    Parity parity = Parity::symmetric;
    ModeProvenance provenance = ModeProvenance::exact;
    double a_in = 0.0;  // interior normalization constant
    double a_out = 0.0; // exterior amplitude, sign carried
};

/// How the levels split between the closed-form level formulas.
/// Family 1 is the sine (antisymmetric) family, family 2 the cosine
/// (symmetric) family; m counts within a family, so n = 2m and n = 2m-1.
struct SpectrumPartition {
    int n_max = 0;
    int m_max1 = 0; // total sine-family levels
    int m_max2 = 0; // total cosine-family levels
    int m1 = 0;     // sine-family levels priced with the low-energy formula
    int m2 = 0;     // cosine-family levels priced with the low-energy formula
    std::vector<ModeProvenance> assignment; // per level, size n_max
};

enum class SpectrumChoice {
    mixed_approx, // per-level low/high closed forms per the partition
    exact,        // bisection roots of the quantization condition
};

/// Number of bound levels, floor((b-a)/pi * sqrt(beta^2 - 2 gamma/sigma^2)).
/// Throws NoBoundStateError when the argument of the root is not positive.
int bound_state_count(const WellGeometry& geom);

/// Solves k1 (b-a)/2 = n pi/2 - arcsin(k1/beta) by bisection on the bracket
/// ((n-1) pi/(b-a), n pi/(b-a)) to residual < 1e-12.
EigenMode exact_mode(const WellGeometry& geom, int n);

/// Low-energy closed form k1 = beta n pi / (beta (b-a) + 2).
EigenMode approx_mode_low(const WellGeometry& geom, int n);

/// High-energy closed form
/// k1 = 2/(b-a) [ (n-1) pi/2 + sqrt(2 - 2 (n-1) pi / (beta (b-a))) ], n >= 2.
EigenMode approx_mode_high(const WellGeometry& geom, int n);

/// Raw values of the two level formulas (no level-count or n >= 2 guards;
/// the n = 1 high-energy value is the degenerate 2 sqrt(2)/(b-a)).
double approx_low_wavenumber(const WellGeometry& geom, int n);
double approx_high_wavenumber(const WellGeometry& geom, int n);

/// Relative-error estimate of the low-energy formula, defined for n >= 1.
double approx_low_rel_error(const WellGeometry& geom, int n);

struct ErrorFormulaValues {
    double low = 0.0;  // n^2 pi^2 / (6 beta [beta(b-a)+2]^2)
    double high = 0.0; // [2 - 2(n-1)pi/(beta(b-a))]^{3/2} / (12 (n-1) pi)
};

/// Closed-form relative-error estimates for the two level formulas.
/// The high formula divides by (n-1) and is undefined at n = 1.
ErrorFormulaValues error_formulas(const WellGeometry& geom, int n);

/// Absolute error estimate of the high-energy formula,
/// [2 - 2(n-1)pi/(beta(b-a))]^{3/2} / (12 (b-a)); defined for n >= 1.
double approx_high_abs_error(const WellGeometry& geom, int n);

/// Assigns each level to the low- or high-energy formula. The top level
/// n = n_max takes the high-energy form (its energy sits at the well top);
/// every other level, and n_max = 1 where the high form degenerates, takes
/// the low-energy form.
SpectrumPartition partition(const WellGeometry& geom);

/// All bound modes for the geometry, exact roots or per-partition formulas.
std::vector<EigenMode> build_spectrum(const WellGeometry& geom, SpectrumChoice choice);

/// Piecewise wavefunction value at log-price x.
double eval_wavefunction(const EigenMode& mode, const WellGeometry& geom, double x);

} // namespace stepwell
