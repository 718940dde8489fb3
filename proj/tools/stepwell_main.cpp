#include "stepwell/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw stepwell::ParameterError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    using namespace stepwell;

    CLI::App app{"stepwell - step and double-barrier step option pricing"};
    app.require_subcommand(0, 1);

    RunConfig cfg;
    std::string config_path, kind = "vanilla", format = "csv", sweep_var;
    double sweep_lo = 0.0, sweep_hi = 0.0;
    int sweep_points = 0;

    app.add_option("--config", config_path, "JSON file mirroring the run configuration");
    app.add_option("--kind", kind, "vanilla|pso|pdbs|uosb|sdb");
    app.add_option("--spot", cfg.spot, "underlying price");
    app.add_option("--strike", cfg.strike, "exercise price");
    app.add_option("--rate", cfg.rate, "risk-free rate (cont. comp., per year)");
    app.add_option("--vol", cfg.vol, "volatility (per sqrt-year)");
    app.add_option("--tau", cfg.tau, "time to expiry (years)");
    app.add_option("--v0", cfg.v0, "knock-out rate V0 (per year, step kinds)");
    app.add_option("--lower-barrier", cfg.lower_barrier, "lower barrier (price units)");
    app.add_option("--upper-barrier", cfg.upper_barrier, "upper barrier (price units)");
    app.add_option("--preset", cfg.preset, "sweep preset: fig1|fig2|fig3|fig4");
    app.add_option("--sweep-var", sweep_var, "spot|strike|v0");
    app.add_option("--sweep-lo", sweep_lo, "sweep lower bound");
    app.add_option("--sweep-hi", sweep_hi, "sweep upper bound");
    app.add_option("--sweep-points", sweep_points, "sweep grid size (>= 2)");
    app.add_option("--format", format, "csv|json");
    app.add_option("--out", cfg.out_path,
                   "output path (relative paths join STEPWELL_OUT_DIR when set)");
    app.add_option("--seed", cfg.paths.seed, "Monte Carlo seed");
    app.add_option("--paths", cfg.paths.n_paths, "Monte Carlo path count");
    app.add_option("--steps-per-year", cfg.paths.steps_per_year, "Monte Carlo step density");
    app.add_flag("--no-antithetic", "disable antithetic pairing");
    app.add_flag("--mc", cfg.use_mc, "price via the Monte Carlo oracle");
    app.add_flag("--exact-spectrum", cfg.exact_spectrum,
                 "use bisection roots instead of the mixed level formulas");
    app.add_flag("--quick", cfg.quick, "validate: fewer paths, scaled tolerances");
    app.add_option("--quad-rel-tol", cfg.quad.rel_tol, "quadrature relative tolerance");
    app.add_option("--quad-abs-tol", cfg.quad.abs_tol, "quadrature absolute tolerance");
    app.add_option("--tail-sigmas", cfg.quad.tail_sigmas,
                   "width multiplier for the above-barrier payoff cut");

    std::string command = "price";
    app.add_option("command", command, "price|sweep|table1|table2|validate|greeks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty())
            apply_config_json(read_file(config_path), cfg);
        // explicit flags override the config document
        for (const CLI::Option* opt : app.get_options()) {
            if (opt->count() == 0)
                continue;
            const std::string name = opt->get_name();
            if (name == "--kind")
                cfg.kind = [&] {
                    if (kind == "pso") return OptionKind::pso_up_out;
                    if (kind == "pdbs") return OptionKind::pdbs;
                    if (kind == "uosb") return OptionKind::uosb;
                    if (kind == "sdb") return OptionKind::sdb;
                    if (kind == "vanilla") return OptionKind::vanilla;
                    throw ParameterError("unknown kind '" + kind + "'");
                }();
            else if (name == "--format") {
                if (format != "csv" && format != "json")
                    throw ParameterError("unknown format '" + format + "'");
                cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
            } else if (name == "--no-antithetic")
                cfg.paths.antithetic = false;
        }
        if (app.count("command") > 0 || config_path.empty()) {
            if (command == "price") cfg.command = Command::price;
            else if (command == "sweep") cfg.command = Command::sweep;
            else if (command == "table1") cfg.command = Command::table1;
            else if (command == "table2") cfg.command = Command::table2;
            else if (command == "validate") cfg.command = Command::validate;
            else if (command == "greeks") cfg.command = Command::greeks;
            else throw ParameterError("unknown command '" + command + "'");
        }
        if (!sweep_var.empty()) {
            SweepSpec sw;
            if (sweep_var == "spot") sw.variable = SweepVariable::spot;
            else if (sweep_var == "strike") sw.variable = SweepVariable::strike;
            else if (sweep_var == "v0") sw.variable = SweepVariable::v0;
            else throw ParameterError("unknown sweep variable '" + sweep_var + "'");
            sw.lo = sweep_lo;
            sw.hi = sweep_hi;
            sw.points = sweep_points;
            cfg.sweep = sw;
        }
        return run_command(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
        return 2;
    }
}
