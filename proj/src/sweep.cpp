#include "stepwell/sweep.hpp"

#include "stepwell/baseline_pricers.hpp"
#include "stepwell/spectrum.hpp"
#include "stepwell/step_pricers.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace stepwell {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fmt_num(*v) : std::string(); }

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 2)
        throw ParameterError("sweep: points must be >= 2");
    if (!(lo < hi))
        throw ParameterError("sweep: requires lo < hi");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return grid;
}

constexpr const char* kCsvHeader =
    "kind,sweep_var,sweep_value,v0,spot,strike,rate,vol,tau,lower_barrier,upper_barrier,"
    "price,c1,c2,c3,c4,c5,c6,std_error";

// Figure-caption parameters shared by the presets (price units).
struct PresetParams {
    double lower = 90.0;
    double upper = 130.0;
    double strike = 100.0;
    double rate = 0.05;
    double vol = 0.3;
    double tau = 1.0;
    std::vector<double> v0_series{13.0, 26.0, 55.0};
};

struct PricePoint {
    OptionKind kind;
    double spot;
    double strike;
    double v0; // ignored for non-step kinds
};

StepOptionSpec make_spec(const RunConfig& cfg, OptionKind kind, double strike, double v0) {
    const double lower = std::log(cfg.lower_barrier);
    const double upper = std::log(cfg.upper_barrier);
    switch (kind) {
    case OptionKind::pso_up_out: return StepOptionSpec::pso(strike, cfg.tau, upper, v0);
    case OptionKind::pdbs: return StepOptionSpec::pdbs(strike, cfg.tau, lower, upper, v0);
    case OptionKind::uosb: return StepOptionSpec::uosb(strike, cfg.tau, upper);
    case OptionKind::sdb: return StepOptionSpec::sdb(strike, cfg.tau, lower, upper);
    case OptionKind::vanilla: return StepOptionSpec::vanilla(strike, cfg.tau);
    }
    throw ParameterError("unknown option kind");
}

// The CLI rejects double-barrier strikes outside the well even where the
// library tolerates the degenerate ln K >= b case.
void check_cli_strike(const RunConfig& cfg, OptionKind kind, double strike) {
    if (kind != OptionKind::pdbs)
        return;
    const double ln_k = std::log(strike);
    if (!(ln_k >= std::log(cfg.lower_barrier) && ln_k < std::log(cfg.upper_barrier)))
        throw UnsupportedRegionError("pdbs strike must satisfy a <= ln K < b");
}

OutputRow base_row(const RunConfig& cfg, const PricePoint& pt) {
    OutputRow row;
    row.kind = to_string(pt.kind);
    row.spot = pt.spot;
    row.strike = pt.strike;
    row.rate = cfg.rate;
    row.vol = cfg.vol;
    row.tau = cfg.tau;
    const bool step_kind =
        pt.kind == OptionKind::pso_up_out || pt.kind == OptionKind::pdbs;
    if (step_kind)
        row.v0 = pt.v0;
    if (pt.kind == OptionKind::pdbs || pt.kind == OptionKind::sdb)
        row.lower_barrier = cfg.lower_barrier;
    if (pt.kind != OptionKind::vanilla)
        row.upper_barrier = cfg.upper_barrier;
    return row;
}

OutputRow price_row(const RunConfig& cfg, const PricePoint& pt) {
    check_cli_strike(cfg, pt.kind, pt.strike);
    const MarketParams mp(cfg.rate, cfg.vol);
    const StepOptionSpec spec = make_spec(cfg, pt.kind, pt.strike, pt.v0);
    const LogSpot x = LogSpot::from_price(pt.spot);
    OutputRow row = base_row(cfg, pt);

    if (cfg.use_mc) {
        const McEstimate est = mc_price(mp, spec, x, cfg.paths);
        row.price = est.mean;
        row.std_error = est.std_error;
        return row;
    }

    const SpectrumChoice choice =
        cfg.exact_spectrum ? SpectrumChoice::exact : SpectrumChoice::mixed_approx;
    switch (pt.kind) {
    case OptionKind::vanilla:
        row.price = bs_call_closed(mp, pt.spot, pt.strike, cfg.tau);
        break;
    case OptionKind::uosb:
        row.price = uosb_price(mp, x, spec, cfg.quad);
        break;
    case OptionKind::sdb:
        row.price = sdb_price(mp, x, spec, cfg.quad);
        break;
    case OptionKind::pso_up_out: {
        const PricingResult res = pso_price(mp, spec, x, cfg.quad);
        row.price = res.price;
        for (const auto& [label, value] : res.components) {
            const int idx = label[1] - '1';
            row.components[static_cast<std::size_t>(idx)] = value;
        }
        break;
    }
    case OptionKind::pdbs: {
        const PricingResult res = pdbs_price(mp, spec, x, cfg.quad, choice);
        row.price = res.price;
        for (std::size_t i = 0; i < res.components.size(); ++i)
            row.components[i] = res.components[i].second;
        break;
    }
    }
    return row;
}

OutputRow delta_row(const RunConfig& cfg, const PricePoint& pt) {
    check_cli_strike(cfg, pt.kind, pt.strike);
    const MarketParams mp(cfg.rate, cfg.vol);
    const StepOptionSpec spec = make_spec(cfg, pt.kind, pt.strike, pt.v0);
    const SpectrumChoice choice =
        cfg.exact_spectrum ? SpectrumChoice::exact : SpectrumChoice::mixed_approx;
    OutputRow row = base_row(cfg, pt);
    row.price = delta(mp, spec, LogSpot::from_price(pt.spot), cfg.quad, choice);
    return row;
}

std::string to_string(SweepVariable var) {
    switch (var) {
    case SweepVariable::spot: return "spot";
    case SweepVariable::strike: return "strike";
    case SweepVariable::v0: return "v0";
    }
    return "";
}

std::vector<OutputRow> preset_rows(const RunConfig& cfg) {
    PresetParams p;
    RunConfig local = cfg;
    local.lower_barrier = p.lower;
    local.upper_barrier = p.upper;
    local.rate = p.rate;
    local.vol = p.vol;
    local.tau = p.tau;

    const bool deltas = (cfg.preset == "fig4");
    std::vector<OutputRow> rows;
    auto emit = [&](const PricePoint& pt, SweepVariable var, double value) {
        OutputRow row = deltas ? delta_row(local, pt) : price_row(local, pt);
        row.sweep_var = to_string(var);
        row.sweep_value = value;
        rows.push_back(std::move(row));
    };

    if (cfg.preset == "fig1" || cfg.preset == "fig4") {
        // step prices (fig1) or deltas (fig4) against the underlying
        const std::vector<double> spots = linspace(91.0, 129.0, 20);
        for (double v0 : p.v0_series)
            for (double s : spots) {
                emit({OptionKind::pso_up_out, s, p.strike, v0}, SweepVariable::spot, s);
                emit({OptionKind::pdbs, s, p.strike, v0}, SweepVariable::spot, s);
            }
        for (double s : spots) {
            emit({OptionKind::uosb, s, p.strike, 0.0}, SweepVariable::spot, s);
            emit({OptionKind::sdb, s, p.strike, 0.0}, SweepVariable::spot, s);
            emit({OptionKind::vanilla, s, p.strike, 0.0}, SweepVariable::spot, s);
        }
        return rows;
    }
    if (cfg.preset == "fig2") {
        const double spot = std::exp(4.605);
        const std::vector<double> strikes = linspace(91.0, 129.0, 20);
        for (double v0 : p.v0_series)
            for (double k : strikes) {
                emit({OptionKind::pso_up_out, spot, k, v0}, SweepVariable::strike, k);
                emit({OptionKind::pdbs, spot, k, v0}, SweepVariable::strike, k);
            }
        for (double k : strikes) {
            emit({OptionKind::uosb, spot, k, 0.0}, SweepVariable::strike, k);
            emit({OptionKind::sdb, spot, k, 0.0}, SweepVariable::strike, k);
            emit({OptionKind::vanilla, spot, k, 0.0}, SweepVariable::strike, k);
        }
        return rows;
    }
    if (cfg.preset == "fig3") {
        const double spot = 110.0;
        const std::vector<double> potentials = linspace(5.0, 100.0, 20);
        for (double v0 : potentials) {
            emit({OptionKind::pso_up_out, spot, p.strike, v0}, SweepVariable::v0, v0);
            emit({OptionKind::pdbs, spot, p.strike, v0}, SweepVariable::v0, v0);
        }
        for (double v0 : potentials) {
            emit({OptionKind::uosb, spot, p.strike, 0.0}, SweepVariable::v0, v0);
            emit({OptionKind::sdb, spot, p.strike, 0.0}, SweepVariable::v0, v0);
            emit({OptionKind::vanilla, spot, p.strike, 0.0}, SweepVariable::v0, v0);
        }
        return rows;
    }
    throw ParameterError("unknown preset '" + cfg.preset + "' (expected fig1..fig4)");
}

} // namespace

std::string render_csv(const std::vector<OutputRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const OutputRow& r : rows) {
        out += r.kind;
        out += ',';
        out += r.sweep_var;
        out += ',';
        out += cell(r.sweep_value) + ',' + cell(r.v0) + ',' + cell(r.spot) + ',' +
               cell(r.strike) + ',' + cell(r.rate) + ',' + cell(r.vol) + ',' + cell(r.tau) +
               ',' + cell(r.lower_barrier) + ',' + cell(r.upper_barrier) + ',' +
               cell(r.price);
        for (const auto& c : r.components)
            out += ',' + cell(c);
        out += ',' + cell(r.std_error);
        out += '\n';
    }
    return out;
}

namespace {

ordered_json row_to_json(const OutputRow& r) {
    auto opt = [](const std::optional<double>& v) {
        return v ? ordered_json(*v) : ordered_json(nullptr);
    };
    ordered_json j;
    j["kind"] = r.kind;
    j["sweep_var"] = r.sweep_var;
    j["sweep_value"] = opt(r.sweep_value);
    j["v0"] = opt(r.v0);
    j["spot"] = opt(r.spot);
    j["strike"] = opt(r.strike);
    j["rate"] = opt(r.rate);
    j["vol"] = opt(r.vol);
    j["tau"] = opt(r.tau);
    j["lower_barrier"] = opt(r.lower_barrier);
    j["upper_barrier"] = opt(r.upper_barrier);
    j["price"] = opt(r.price);
    for (std::size_t i = 0; i < r.components.size(); ++i)
        j["c" + std::to_string(i + 1)] = opt(r.components[i]);
    j["std_error"] = opt(r.std_error);
    return j;
}

} // namespace

std::string render_json(const std::vector<OutputRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const OutputRow& r : rows)
        arr.push_back(row_to_json(r));
    return arr.dump(2) + "\n";
}

std::vector<Table1Row> table1_rows() {
    const MarketParams mp(0.05, 0.3);
    const ModelCoefficients mc = model_coefficients(mp);
    const WellGeometry geom(std::log(90.0), std::log(130.0), 55.0, mp.vol, mc.gamma);
    const int nm = bound_state_count(geom);
    std::vector<Table1Row> rows;
    for (int n = 1; n <= nm; ++n) {
        Table1Row row;
        row.n = n;
        row.low_rel_err = approx_low_rel_error(geom, n);
        row.high_rel_err = approx_high_abs_error(geom, n) / approx_high_wavenumber(geom, n);
        rows.push_back(row);
    }
    return rows;
}

std::vector<Table2Row> table2_rows() {
    const MarketParams mp(0.05, 0.3);
    const ModelCoefficients mc = model_coefficients(mp);
    std::vector<Table2Row> rows;
    for (double v0 : {55.0, 26.0, 13.0}) {
        const WellGeometry geom(std::log(90.0), std::log(130.0), v0, mp.vol, mc.gamma);
        const SpectrumPartition part = partition(geom);
        Table2Row row;
        row.v0 = v0;
        row.beta = geom.beta();
        row.n_max = part.n_max;
        row.m_max1 = part.m_max1;
        row.m_max2 = part.m_max2;
        row.m1 = part.m1;
        row.m2 = part.m2;
        rows.push_back(row);
    }
    return rows;
}

std::string render_table1(OutputFormat format) {
    const auto rows = table1_rows();
    if (format == OutputFormat::csv) {
        std::string out = "n,low_rel_err,high_rel_err\n";
        for (const auto& r : rows)
            out += std::to_string(r.n) + ',' + fmt_num(r.low_rel_err) + ',' +
                   fmt_num(r.high_rel_err) + '\n';
        return out;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"n", r.n},
                       {"low_rel_err", r.low_rel_err},
                       {"high_rel_err", r.high_rel_err}});
    return arr.dump(2) + "\n";
}

std::string render_table2(OutputFormat format) {
    const auto rows = table2_rows();
    if (format == OutputFormat::csv) {
        std::string out = "v0,beta,n_max,m_max1,m_max2,m1,m2\n";
        for (const auto& r : rows)
            out += fmt_num(r.v0) + ',' + fmt_num(r.beta) + ',' + std::to_string(r.n_max) +
                   ',' + std::to_string(r.m_max1) + ',' + std::to_string(r.m_max2) + ',' +
                   std::to_string(r.m1) + ',' + std::to_string(r.m2) + '\n';
        return out;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"v0", r.v0},
                       {"beta", r.beta},
                       {"n_max", r.n_max},
                       {"m_max1", r.m_max1},
                       {"m_max2", r.m_max2},
                       {"m1", r.m1},
                       {"m2", r.m2}});
    return arr.dump(2) + "\n";
}

std::vector<OutputRow> run_price(const RunConfig& cfg) {
    PricePoint pt{cfg.kind, cfg.spot, cfg.strike, cfg.v0};
    std::vector<OutputRow> rows;
    rows.push_back(cfg.command == Command::greeks ? delta_row(cfg, pt) : price_row(cfg, pt));
    return rows;
}

std::vector<OutputRow> run_sweep(const RunConfig& cfg) {
    if (!cfg.preset.empty())
        return preset_rows(cfg);
    if (!cfg.sweep)
        throw ParameterError("sweep: needs --preset or an explicit sweep range");
    const SweepSpec& sw = *cfg.sweep;
    const std::vector<double> grid = linspace(sw.lo, sw.hi, sw.points);
    std::vector<OutputRow> rows;
    for (double value : grid) {
        PricePoint pt{cfg.kind, cfg.spot, cfg.strike, cfg.v0};
        switch (sw.variable) {
        case SweepVariable::spot: pt.spot = value; break;
        case SweepVariable::strike: pt.strike = value; break;
        case SweepVariable::v0: pt.v0 = value; break;
        }
        OutputRow row =
            cfg.command == Command::greeks ? delta_row(cfg, pt) : price_row(cfg, pt);
        row.sweep_var = to_string(sw.variable);
        row.sweep_value = value;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string ValidationReport::to_json() const {
    ordered_json j;
    j["all_passed"] = all_passed;
    ordered_json arr = ordered_json::array();
    for (const CheckResult& c : checks)
        arr.push_back({{"name", c.name},
                       {"passed", c.passed},
                       {"value", c.value},
                       {"tolerance", c.tolerance},
                       {"details", c.details}});
    j["checks"] = arr;
    return j.dump(2) + "\n";
}

ValidationReport run_validation(const RunConfig& cfg) {
    ValidationReport report;
    auto add = [&](CheckResult c) { report.checks.push_back(std::move(c)); };

    const MarketParams mp(cfg.rate, cfg.vol);
    const ModelCoefficients coeff = model_coefficients(mp);
    const double lower = std::log(90.0), upper = std::log(130.0);
    const QuadConfig quad = cfg.quad;
    RunConfig fig = cfg;
    fig.lower_barrier = 90.0;
    fig.upper_barrier = 130.0;

    // spectrum tables
    {
        CheckResult c{"table2-counts", true, 0, 0, ""};
        const auto rows = table2_rows();
        const int expect[3][5] = {{4, 2, 2, 1, 2}, {2, 1, 1, 0, 1}, {1, 0, 1, 0, 1}};
        std::ostringstream details;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            const bool ok = r.n_max == expect[i][0] && r.m_max1 == expect[i][1] &&
                            r.m_max2 == expect[i][2] && r.m1 == expect[i][3] &&
                            r.m2 == expect[i][4];
            c.passed = c.passed && ok;
            details << "V0=" << r.v0 << ": n_max=" << r.n_max << " m_max1=" << r.m_max1
                    << " m_max2=" << r.m_max2 << " m1=" << r.m1 << " m2=" << r.m2 << "; ";
        }
        c.details = details.str();
        add(std::move(c));
    }
    {
        CheckResult c{"table1-errors", true, 0, 0.05, ""};
        const auto rows = table1_rows();
        const double low_ref[4] = {2.14e-4, 8.55e-4, 0.002, 0.0034};
        const double high_ref[4] = {0.0833, 0.0276, 0.01, 0.00296};
        std::ostringstream details;
        for (std::size_t i = 0; i < rows.size() && i < 4; ++i) {
            const double low_dev = std::fabs(rows[i].low_rel_err - low_ref[i]) / low_ref[i];
            const double high_dev = std::fabs(rows[i].high_rel_err - high_ref[i]) / high_ref[i];
            c.passed = c.passed && low_dev < 0.05 && high_dev < 0.30;
            c.value = std::max(c.value, low_dev);
        }
        for (std::size_t i = 1; i < rows.size(); ++i)
            c.passed = c.passed && rows[i].low_rel_err > rows[i - 1].low_rel_err &&
                       rows[i].high_rel_err < rows[i - 1].high_rel_err;
        c.passed = c.passed && rows.size() == 4 &&
                   rows[3].high_rel_err < rows[3].low_rel_err &&
                   rows[2].high_rel_err > rows[2].low_rel_err;
        const WellGeometry geom(lower, upper, 55.0, mp.vol, coeff.gamma);
        details << "direct high-formula values (n=2,3): "
                << fmt_num(error_formulas(geom, 2).high) << ", "
                << fmt_num(error_formulas(geom, 3).high)
                << " vs published 0.0276, 0.01 (normalized column used)";
        c.details = details.str();
        add(std::move(c));
    }
    // Appendix A consistency
    {
        CheckResult c{"bs-kernel-vs-closed", true, 0, 1e-6, ""};
        double worst = 0.0;
        for (double s : {95.0, 110.0, 125.0})
            for (double k : {90.0, 105.0})
                for (double t : {0.5, 1.0}) {
                    const double x = std::log(s);
                    const double x0 = x + t * (mp.rate - 0.5 * mp.vol * mp.vol);
                    const double hi = x0 + t * mp.vol * mp.vol + 12.0 * mp.vol * std::sqrt(t);
                    const double quadv =
                        integrate(
                            [&](double xp) {
                                return bs_kernel(mp, x, xp, t) * (std::exp(xp) - k);
                            },
                            std::log(k), hi, quad)
                            .value;
                    worst = std::max(worst, std::fabs(quadv - bs_call_closed(mp, s, k, t)));
                }
        const double x = std::log(110.0);
        const double x0 = x + cfg.tau * (mp.rate - 0.5 * mp.vol * mp.vol);
        const double mass = integrate([&](double xp) { return bs_kernel(mp, x, xp, cfg.tau); },
                                      x0 - 12.0 * mp.vol, x0 + 12.0 * mp.vol, quad)
                                .value;
        const double mass_err = std::fabs(mass - std::exp(-mp.rate * cfg.tau));
        c.value = worst;
        c.passed = worst < 1e-6 && mass_err < 1e-8;
        c.details = "kernel mass error " + fmt_num(mass_err);
        add(std::move(c));
    }

    auto pso_at = [&](double spot, double v0, double strike) {
        return pso_price(mp, StepOptionSpec::pso(strike, cfg.tau, upper, v0),
                         LogSpot::from_price(spot), quad)
            .price;
    };
    auto pdbs_at = [&](double spot, double v0, double strike, SpectrumChoice choice) {
        return pdbs_price(mp, StepOptionSpec::pdbs(strike, cfg.tau, lower, upper, v0),
                          LogSpot::from_price(spot), quad, choice)
            .price;
    };
    auto uosb_at = [&](double spot, double strike) {
        return uosb_price(mp, LogSpot::from_price(spot),
                          StepOptionSpec::uosb(strike, cfg.tau, upper), quad);
    };
    auto sdb_at = [&](double spot, double strike) {
        return sdb_price(mp, LogSpot::from_price(spot),
                         StepOptionSpec::sdb(strike, cfg.tau, lower, upper), quad);
    };

    // ordering properties
    {
        CheckResult c{"sandwich", true, 0, 0, "barrier <= step <= vanilla"};
        for (double s : {95.0, 110.0, 125.0}) {
            const double bs = bs_call_closed(mp, s, 100.0, cfg.tau);
            const double ub = uosb_at(s, 100.0);
            const double sb = sdb_at(s, 100.0);
            for (double v0 : {13.0, 55.0}) {
                const double slack = 1e-4 * s;
                const double ps = pso_at(s, v0, 100.0);
                const double pd = pdbs_at(s, v0, 100.0, SpectrumChoice::mixed_approx);
                c.passed = c.passed && ub - slack <= ps && ps <= bs + slack &&
                           sb - slack <= pd && pd <= bs + slack;
            }
        }
        add(std::move(c));
    }
    {
        CheckResult c{"v0-monotonicity", true, 0, 0, ""};
        double prev_pso = 1e300, prev_pdbs = 1e300;
        for (double v0 : {13.0, 26.0, 55.0, 100.0}) {
            const double ps = pso_at(110.0, v0, 100.0);
            const double pd = pdbs_at(110.0, v0, 100.0, SpectrumChoice::mixed_approx);
            c.passed = c.passed && ps <= prev_pso + 1e-9 && pd <= prev_pdbs + 1e-9;
            prev_pso = ps;
            prev_pdbs = pd;
        }
        add(std::move(c));
    }
    {
        CheckResult c{"k-monotonicity", true, 0, 0, ""};
        double prev_pso = 1e300, prev_pdbs = 1e300;
        for (double k : {90.0, 100.0, 110.0, 120.0}) {
            const double ps = pso_at(110.0, 55.0, k);
            const double pd = pdbs_at(110.0, 55.0, k, SpectrumChoice::mixed_approx);
            c.passed = c.passed && ps <= prev_pso + 1e-9 && pd <= prev_pdbs + 1e-9;
            prev_pso = ps;
            prev_pdbs = pd;
        }
        add(std::move(c));
    }
    // approach to the hard-barrier limits
    {
        CheckResult c{"limit-approach", true, 0, 0.10, ""};
        const double ub = uosb_at(110.0, 100.0);
        const double sb = sdb_at(110.0, 100.0);
        const double gap_pso_1 = std::fabs(pso_at(110.0, 1e4, 100.0) - ub) / ub;
        const double gap_pso_2 = std::fabs(pso_at(110.0, 4e4, 100.0) - ub) / ub;
        const double gap_pdbs_1 =
            std::fabs(pdbs_at(110.0, 1e4, 100.0, SpectrumChoice::exact) - sb) / sb;
        const double gap_pdbs_2 =
            std::fabs(pdbs_at(110.0, 4e4, 100.0, SpectrumChoice::exact) - sb) / sb;
        c.value = std::max(gap_pso_1, gap_pdbs_1);
        c.passed = gap_pso_1 < 0.10 && gap_pdbs_1 < 0.10 && gap_pso_2 < gap_pso_1 &&
                   gap_pdbs_2 < gap_pdbs_1;
        c.details = "gaps at V0=1e4: pso " + fmt_num(gap_pso_1) + ", pdbs " +
                    fmt_num(gap_pdbs_1) + "; at 4e4: pso " + fmt_num(gap_pso_2) + ", pdbs " +
                    fmt_num(gap_pdbs_2) + " (O(V0^-1/2) approach to the hard-barrier limit)";
        add(std::move(c));
    }
    // Monte Carlo cross-checks
    {
        PathConfig pc = cfg.paths;
        if (cfg.quick)
            pc.n_paths = std::min(pc.n_paths, 20000L);
        const double mc_scale =
            std::sqrt(static_cast<double>(200000) / static_cast<double>(pc.n_paths));
        {
            CheckResult c{"mc-vanilla", true, 0, 3.0, ""};
            const McEstimate est = mc_price(mp, StepOptionSpec::vanilla(100.0, cfg.tau),
                                            LogSpot::from_price(110.0), pc);
            const double bs = bs_call_closed(mp, 110.0, 100.0, cfg.tau);
            c.value = std::fabs(est.mean - bs) / est.std_error;
            c.passed = c.value <= 3.0;
            c.details = "mc " + fmt_num(est.mean) + " +- " + fmt_num(est.std_error) +
                        " vs closed " + fmt_num(bs);
            add(std::move(c));
        }
        {
            CheckResult c{"mc-pso", true, 0, 0.05 * mc_scale, ""};
            const McEstimate est =
                mc_price(mp, StepOptionSpec::pso(100.0, cfg.tau, upper, 55.0),
                         LogSpot::from_price(110.0), pc);
            const double analytic = pso_at(110.0, 55.0, 100.0);
            c.value = std::fabs(analytic - est.mean) / est.mean;
            c.passed = c.value <= c.tolerance;
            c.details = "analytic " + fmt_num(analytic) + " vs mc " + fmt_num(est.mean) +
                        " +- " + fmt_num(est.std_error);
            add(std::move(c));
        }
        {
            CheckResult c{"mc-pdbs", true, 0, 0.05 * mc_scale, ""};
            const McEstimate est =
                mc_price(mp, StepOptionSpec::pdbs(100.0, cfg.tau, lower, upper, 55.0),
                         LogSpot::from_price(110.0), pc);
            const double analytic = pdbs_at(110.0, 55.0, 100.0, SpectrumChoice::exact);
            c.value = std::fabs(analytic - est.mean) / est.mean;
            c.passed = c.value <= c.tolerance;
            c.details = "analytic " + fmt_num(analytic) + " vs mc " + fmt_num(est.mean) +
                        " +- " + fmt_num(est.std_error);
            add(std::move(c));
        }
    }
    // deltas
    {
        CheckResult c{"delta-vanilla", true, 0, 1e-4, ""};
        const double s = 110.0;
        const double st = mp.vol * std::sqrt(cfg.tau);
        const double d_plus =
            (std::log(s / 100.0) + (mp.rate + 0.5 * mp.vol * mp.vol) * cfg.tau) / st;
        const double fd = delta(mp, StepOptionSpec::vanilla(100.0, cfg.tau),
                                LogSpot::from_price(s), quad);
        c.value = std::fabs(fd - normal_cdf(d_plus));
        c.passed = c.value < 1e-4;
        add(std::move(c));
    }
    {
        CheckResult c{"delta-v0-ordering", true, 0, 0, "deltas decrease in V0 at S=100"};
        double prev_pso = 1e300, prev_pdbs = 1e300;
        for (double v0 : {13.0, 26.0, 55.0}) {
            const double dp = delta(mp, StepOptionSpec::pso(100.0, cfg.tau, upper, v0),
                                    LogSpot::from_price(100.0), quad);
            const double dd = delta(mp, StepOptionSpec::pdbs(100.0, cfg.tau, lower, upper, v0),
                                    LogSpot::from_price(100.0), quad);
            c.passed = c.passed && std::isfinite(dp) && std::isfinite(dd) && dp < prev_pso &&
                       dd < prev_pdbs;
            prev_pso = dp;
            prev_pdbs = dd;
        }
        add(std::move(c));
    }
    // repeatability of rendered output
    {
        CheckResult c{"determinism", true, 0, 0, "sweep rendered twice, byte-compared"};
        RunConfig sweep_cfg = fig;
        sweep_cfg.command = Command::sweep;
        sweep_cfg.kind = OptionKind::pdbs;
        sweep_cfg.spot = 110.0;
        sweep_cfg.strike = 100.0;
        sweep_cfg.sweep = SweepSpec{SweepVariable::v0, 5.0, 100.0, 5};
        const std::string first = render_csv(run_sweep(sweep_cfg));
        const std::string second = render_csv(run_sweep(sweep_cfg));
        c.passed = (first == second);
        add(std::move(c));
    }

    report.all_passed = true;
    for (const CheckResult& c : report.checks)
        report.all_passed = report.all_passed && c.passed;
    return report;
}

std::string resolve_out_path(const std::string& out_path) {
    if (out_path.empty() || out_path.front() == '/')
        return out_path;
    const char* dir = std::getenv("STEPWELL_OUT_DIR");
    if (dir == nullptr || *dir == '\0')
        return out_path;
    std::string joined(dir);
    if (joined.back() != '/')
        joined += '/';
    return joined + out_path;
}

int run_command(const RunConfig& cfg, std::ostream& out) {
    std::string payload;
    int exit_code = 0;
    switch (cfg.command) {
    case Command::price:
    case Command::greeks: {
        const auto rows = run_price(cfg);
        payload = cfg.format == OutputFormat::csv ? render_csv(rows) : render_json(rows);
        break;
    }
    case Command::sweep: {
        const auto rows = run_sweep(cfg);
        payload = cfg.format == OutputFormat::csv ? render_csv(rows) : render_json(rows);
        break;
    }
    case Command::table1:
        payload = render_table1(cfg.format);
        break;
    case Command::table2:
        payload = render_table2(cfg.format);
        break;
    case Command::validate: {
        const ValidationReport report = run_validation(cfg);
        payload = report.to_json();
        exit_code = report.all_passed ? 0 : 1;
        break;
    }
    }
    const std::string path = resolve_out_path(cfg.out_path);
    if (path.empty()) {
        out << payload;
    } else {
        std::ofstream file(path, std::ios::binary);
        if (!file)
            throw ParameterError("cannot open output file: " + path);
        file << payload;
    }
    return exit_code;
}

namespace {

OptionKind kind_from_string(const std::string& s) {
    if (s == "pso") return OptionKind::pso_up_out;
    if (s == "pdbs") return OptionKind::pdbs;
    if (s == "uosb") return OptionKind::uosb;
    if (s == "sdb") return OptionKind::sdb;
    if (s == "vanilla") return OptionKind::vanilla;
    throw ParameterError("unknown kind '" + s + "'");
}

Command command_from_string(const std::string& s) {
    if (s == "price") return Command::price;
    if (s == "sweep") return Command::sweep;
    if (s == "table1") return Command::table1;
    if (s == "table2") return Command::table2;
    if (s == "validate") return Command::validate;
    if (s == "greeks") return Command::greeks;
    throw ParameterError("unknown command '" + s + "'");
}

SweepVariable sweep_var_from_string(const std::string& s) {
    if (s == "spot") return SweepVariable::spot;
    if (s == "strike") return SweepVariable::strike;
    if (s == "v0") return SweepVariable::v0;
    throw ParameterError("unknown sweep variable '" + s + "'");
}

} // namespace

void apply_config_json(const std::string& json_text, RunConfig& cfg) {
    const auto j = nlohmann::json::parse(json_text);
    if (j.contains("command")) cfg.command = command_from_string(j["command"]);
    if (j.contains("kind")) cfg.kind = kind_from_string(j["kind"]);
    if (j.contains("spot")) cfg.spot = j["spot"];
    if (j.contains("strike")) cfg.strike = j["strike"];
    if (j.contains("rate")) cfg.rate = j["rate"];
    if (j.contains("vol")) cfg.vol = j["vol"];
    if (j.contains("tau")) cfg.tau = j["tau"];
    if (j.contains("v0")) cfg.v0 = j["v0"];
    if (j.contains("lower_barrier")) cfg.lower_barrier = j["lower_barrier"];
    if (j.contains("upper_barrier")) cfg.upper_barrier = j["upper_barrier"];
    if (j.contains("preset")) cfg.preset = j["preset"];
    if (j.contains("format"))
        cfg.format = j["format"] == "json" ? OutputFormat::json : OutputFormat::csv;
    if (j.contains("out")) cfg.out_path = j["out"];
    if (j.contains("exact_spectrum")) cfg.exact_spectrum = j["exact_spectrum"];
    if (j.contains("mc")) cfg.use_mc = j["mc"];
    if (j.contains("quick")) cfg.quick = j["quick"];
    if (j.contains("seed")) cfg.paths.seed = j["seed"];
    if (j.contains("n_paths")) cfg.paths.n_paths = j["n_paths"];
    if (j.contains("steps_per_year")) cfg.paths.steps_per_year = j["steps_per_year"];
    if (j.contains("antithetic")) cfg.paths.antithetic = j["antithetic"];
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        SweepSpec sw;
        sw.variable = sweep_var_from_string(s.at("variable"));
        sw.lo = s.at("lo");
        sw.hi = s.at("hi");
        sw.points = s.at("points");
        cfg.sweep = sw;
    }
    if (j.contains("quad")) {
        const auto& q = j["quad"];
        if (q.contains("rel_tol")) cfg.quad.rel_tol = q["rel_tol"];
        if (q.contains("abs_tol")) cfg.quad.abs_tol = q["abs_tol"];
        if (q.contains("max_subdivisions")) cfg.quad.max_subdivisions = q["max_subdivisions"];
        if (q.contains("tail_sigmas")) cfg.quad.tail_sigmas = q["tail_sigmas"];
        if (q.contains("endpoint_clip")) cfg.quad.endpoint_clip = q["endpoint_clip"];
    }
}

} // namespace stepwell
