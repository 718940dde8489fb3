#pragma once

#include "stepwell/core.hpp"
#include "stepwell/mc_oracle.hpp"
#include "stepwell/quadrature.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stepwell {

enum class Command { price, sweep, table1, table2, validate, greeks };
enum class OutputFormat { csv, json };
enum class SweepVariable { spot, strike, v0 };

struct SweepSpec {
    SweepVariable variable = SweepVariable::spot;
    double lo = 0.0;
    double hi = 0.0;
    int points = 2;
};

/// Everything a CLI invocation needs. Barriers, spot and strike are in price
/// units here; conversion to log-price happens at the contract boundary.
struct RunConfig {
    Command command = Command::price;
    OptionKind kind = OptionKind::vanilla;
    double spot = 110.0;
    double strike = 100.0;
    double rate = 0.05;
    double vol = 0.3;
    double tau = 1.0;
    double v0 = 55.0;
    double lower_barrier = 90.0;
    double upper_barrier = 130.0;
    std::string preset; // fig1 | fig2 | fig3 | fig4, sweep command only
    std::optional<SweepSpec> sweep;
    OutputFormat format = OutputFormat::csv;
    std::string out_path; // empty -> stdout
    QuadConfig quad;
    PathConfig paths;
    bool exact_spectrum = false;
    bool use_mc = false; // price/sweep via the Monte Carlo oracle
    bool quick = false;  // validate: fewer paths, proportionally wider tolerances
};

/// One line of the fixed output schema shared by price/sweep/greeks.
struct OutputRow {
    std::string kind;
    std::string sweep_var;
    std::optional<double> sweep_value;
    std::optional<double> v0;
    std::optional<double> spot;
    std::optional<double> strike;
    std::optional<double> rate;
    std::optional<double> vol;
    std::optional<double> tau;
    std::optional<double> lower_barrier;
    std::optional<double> upper_barrier;
    std::optional<double> price;
    std::array<std::optional<double>, 6> components;
    std::optional<double> std_error;
};

std::string render_csv(const std::vector<OutputRow>& rows);
std::string render_json(const std::vector<OutputRow>& rows);

struct Table1Row {
    int n = 0;
    double low_rel_err = 0.0;
    double high_rel_err = 0.0;
};
struct Table2Row {
    double v0 = 0.0;
    double beta = 0.0;
    int n_max = 0;
    int m_max1 = 0;
    int m_max2 = 0;
    int m1 = 0;
    int m2 = 0;
};

std::vector<Table1Row> table1_rows();
std::vector<Table2Row> table2_rows();

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string details;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_passed = false;
    std::string to_json() const;
};

std::vector<OutputRow> run_price(const RunConfig& cfg);
std::vector<OutputRow> run_sweep(const RunConfig& cfg);
std::string render_table1(OutputFormat format);
std::string render_table2(OutputFormat format);
ValidationReport run_validation(const RunConfig& cfg);

/// Executes cfg, writing the payload to cfg.out_path (or `out` when empty).
/// Returns the process exit code: 0 on success, 1 on failed validation.
int run_command(const RunConfig& cfg, std::ostream& out);

/// Resolves the effective output path: relative paths are joined onto the
/// STEPWELL_OUT_DIR environment variable when it is set.
std::string resolve_out_path(const std::string& out_path);

/// Merges a JSON document (mirroring RunConfig) into cfg.
void apply_config_json(const std::string& json_text, RunConfig& cfg);

} // namespace stepwell
