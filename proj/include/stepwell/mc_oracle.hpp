#pragma once

#include "stepwell/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stepwell {

/// xoshiro256++ seeded through splitmix64 (Blackman & Vigna's reference
/// construction). Streams are derived per batch from (seed, batch index), so
/// results do not depend on how batches are scheduled.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed);
    std::uint64_t next();
    /// Uniform double strictly inside (0, 1).
    double uniform01();

private:
    std::uint64_t s_[4];
};

struct PathConfig {
    long n_paths = 200000; // total simulated paths, antithetic partners included
    int steps_per_year = 250;
    std::uint64_t seed = 20240601;
    bool antithetic = true;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    std::uint64_t seed = 0;
    std::string algorithm; // generator + normal-draw method, for reproducibility
};

/// Monte Carlo price under log-GBM with per-step occupation-time
/// accumulation. Step kinds discount by exp(-V0 * tau_out); uosb/sdb treat
/// the barrier as a hard kill on first grid touch.
McEstimate mc_price(const MarketParams& mp, const StepOptionSpec& spec, LogSpot x,
                    const PathConfig& pc);

struct ConvergenceRow {
    long n_paths = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// Re-prices on an ascending path-count ladder with the same seed.
std::vector<ConvergenceRow> mc_convergence_report(const MarketParams& mp,
                                                  const StepOptionSpec& spec, LogSpot x,
                                                  const PathConfig& pc,
                                                  const std::vector<long>& ladder);

} // namespace stepwell
