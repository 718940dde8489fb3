#include "stepwell/mc_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace stepwell {

namespace {

constexpr const char* kAlgorithmName = "xoshiro256++/splitmix64/as241-icdf";
constexpr long kPairsPerBatch = 4096;

std::uint64_t splitmix64_step(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// order-insensitive reduction helper
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double total() const { return sum + comp; }
};

} // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_)
        word = splitmix64_step(sm);
}

std::uint64_t Xoshiro256pp::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256pp::uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

namespace {

struct PathAccumulator {
    double x;
    double tau_out = 0.0;
    bool alive = true;
};

McEstimate run_mc(const MarketParams& mp, const StepOptionSpec& spec, LogSpot x0,
                  const PathConfig& pc) {
    if (pc.n_paths < 1000)
        throw ParameterError("PathConfig: n_paths must be >= 1000");
    if (pc.steps_per_year < 50)
        throw ParameterError("PathConfig: steps_per_year must be >= 50");

    const int n_steps = std::max(1, static_cast<int>(std::llround(pc.steps_per_year * spec.expiry)));
    const double dt = spec.expiry / n_steps;
    const double drift = (mp.rate - 0.5 * mp.vol * mp.vol) * dt;
    const double vol_step = mp.vol * std::sqrt(dt);
    const double discount = std::exp(-mp.rate * spec.expiry);
    const double v0 = spec.knockout_rate;
    const double upper = spec.upper_barrier;
    const double lower = spec.lower_barrier;
    const OptionKind kind = spec.kind;

    const long n_units = pc.antithetic ? pc.n_paths / 2 : pc.n_paths;
    if (n_units < 1)
        throw ParameterError("PathConfig: too few paths for the antithetic setting");

    auto unit_payoff = [&](Xoshiro256pp& gen) {
        PathAccumulator p{x0.value};
        PathAccumulator q{x0.value};
        for (int step = 0; step < n_steps; ++step) {
            const double z = normal_quantile(gen.uniform01());
            p.x += drift + vol_step * z;
            q.x += drift - vol_step * z;
            switch (kind) {
            case OptionKind::pso_up_out:
                if (p.x >= upper) p.tau_out += dt;
                if (q.x >= upper) q.tau_out += dt;
                break;
            case OptionKind::pdbs:
                if (p.x <= lower || p.x >= upper) p.tau_out += dt;
                if (q.x <= lower || q.x >= upper) q.tau_out += dt;
                break;
            case OptionKind::uosb:
                if (p.x >= upper) p.alive = false;
                if (q.x >= upper) q.alive = false;
                break;
            case OptionKind::sdb:
                if (p.x <= lower || p.x >= upper) p.alive = false;
                if (q.x <= lower || q.x >= upper) q.alive = false;
                break;
            case OptionKind::vanilla:
                break;
            }
        }
        auto payoff = [&](const PathAccumulator& path) {
            double value = std::max(std::exp(path.x) - spec.strike, 0.0) * discount;
            if (kind == OptionKind::pso_up_out || kind == OptionKind::pdbs)
                value *= std::exp(-v0 * path.tau_out);
            else if (kind == OptionKind::uosb || kind == OptionKind::sdb)
                value *= path.alive ? 1.0 : 0.0;
            return value;
        };
        return pc.antithetic ? 0.5 * (payoff(p) + payoff(q)) : payoff(p);
    };

    NeumaierSum sum, sum_sq;
    const long n_batches = (n_units + kPairsPerBatch - 1) / kPairsPerBatch;
    for (long batch = 0; batch < n_batches; ++batch) {
        std::uint64_t mix = pc.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(batch + 1);
        Xoshiro256pp gen(splitmix64_step(mix));
        const long begin = batch * kPairsPerBatch;
        const long end = std::min(begin + kPairsPerBatch, n_units);
        NeumaierSum batch_sum, batch_sq;
        for (long i = begin; i < end; ++i) {
            const double y = unit_payoff(gen);
            batch_sum.add(y);
            batch_sq.add(y * y);
        }
        sum.add(batch_sum.total());
        sum_sq.add(batch_sq.total());
    }

    const double n = static_cast<double>(n_units);
    const double mean = sum.total() / n;
    const double var = std::max(sum_sq.total() - n * mean * mean, 0.0) / (n - 1.0);
    McEstimate est;
    est.mean = mean;
    est.std_error = std::sqrt(var / n);
    est.n_paths = pc.antithetic ? 2 * n_units : n_units;
    est.seed = pc.seed;
    est.algorithm = kAlgorithmName;
    return est;
}

} // namespace

McEstimate mc_price(const MarketParams& mp, const StepOptionSpec& spec, LogSpot x,
                    const PathConfig& pc) {
    return run_mc(mp, spec, x, pc);
}

std::vector<ConvergenceRow> mc_convergence_report(const MarketParams& mp,
                                                  const StepOptionSpec& spec, LogSpot x,
                                                  const PathConfig& pc,
                                                  const std::vector<long>& ladder) {
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] > ladder[i - 1]))
            throw ParameterError("mc_convergence_report: ladder must be ascending");
    std::vector<ConvergenceRow> rows;
    rows.reserve(ladder.size());
    for (long n : ladder) {
        PathConfig step_pc = pc;
        step_pc.n_paths = n;
        const McEstimate est = run_mc(mp, spec, x, step_pc);
        rows.push_back({est.n_paths, est.mean, est.std_error});
    }
    return rows;
}

} // namespace stepwell
