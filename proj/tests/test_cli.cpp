#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stepwell/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

using namespace stepwell;

namespace {

RunConfig base_config() {
    RunConfig cfg;
    cfg.rate = 0.05;
    cfg.vol = 0.3;
    cfg.tau = 1.0;
    cfg.lower_barrier = 90.0;
    cfg.upper_barrier = 130.0;
    return cfg;
}

int count_columns(const std::string& line) {
    int commas = 0;
    for (char ch : line)
        if (ch == ',')
            ++commas;
    return commas + 1;
}

} // namespace

TEST_CASE("price command, vanilla") {
    RunConfig cfg = base_config();
    cfg.command = Command::price;
    cfg.kind = OptionKind::vanilla;
    cfg.spot = 110.0;
    cfg.strike = 100.0;
    const auto rows = run_price(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(std::fabs(*rows[0].price - 21.06) < 0.01);
    CHECK(rows[0].kind == "vanilla");
    // full parameter echo
    CHECK(rows[0].spot.has_value());
    CHECK(rows[0].strike.has_value());
    CHECK(rows[0].rate.has_value());
    CHECK(rows[0].vol.has_value());
    CHECK(rows[0].tau.has_value());
}

TEST_CASE("price command error surfaces") {
    RunConfig cfg = base_config();
    cfg.command = Command::price;
    cfg.kind = OptionKind::pdbs;
    cfg.spot = 110.0;
    cfg.strike = 135.0; // ln K above the upper barrier
    cfg.v0 = 55.0;
    CHECK_THROWS_AS(run_price(cfg), UnsupportedRegionError);

    cfg.strike = 100.0;
    cfg.kind = OptionKind::pso_up_out;
    cfg.v0 = 0.01; // below gamma
    CHECK_THROWS_AS(run_price(cfg), ParameterError);

    cfg.v0 = 55.0;
    cfg.vol = 0.0;
    CHECK_THROWS_AS(run_price(cfg), ParameterError);
}

TEST_CASE("csv schema and byte stability") {
    RunConfig cfg = base_config();
    cfg.command = Command::sweep;
    cfg.kind = OptionKind::pdbs;
    cfg.v0 = 55.0;
    cfg.spot = 110.0;
    cfg.sweep = SweepSpec{SweepVariable::strike, 95.0, 120.0, 4};
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 4);
    const std::string csv = render_csv(rows);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "kind,sweep_var,sweep_value,v0,spot,strike,rate,vol,tau,lower_barrier,"
          "upper_barrier,price,c1,c2,c3,c4,c5,c6,std_error");
    std::string line;
    int n_lines = 0;
    while (std::getline(in, line)) {
        CHECK(count_columns(line) == 19);
        ++n_lines;
    }
    CHECK(n_lines == 4);
    CHECK(csv == render_csv(run_sweep(cfg)));
    CHECK(csv.find("\r") == std::string::npos); // LF terminators only

    const std::string json = render_json(rows);
    CHECK(json == render_json(run_sweep(cfg)));
    CHECK(json.find("\"price\"") != std::string::npos);
}

TEST_CASE("monte carlo sweep rows are byte-stable and carry the std error") {
    RunConfig cfg = base_config();
    cfg.command = Command::sweep;
    cfg.kind = OptionKind::vanilla;
    cfg.use_mc = true;
    cfg.paths.n_paths = 5000;
    cfg.paths.seed = 909;
    cfg.sweep = SweepSpec{SweepVariable::spot, 100.0, 120.0, 3};
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.std_error.has_value());
        CHECK(*r.std_error > 0.0);
    }
    CHECK(render_csv(rows) == render_csv(run_sweep(cfg)));
}

TEST_CASE("degenerate two-point sweep") {
    RunConfig cfg = base_config();
    cfg.command = Command::sweep;
    cfg.kind = OptionKind::vanilla;
    cfg.spot = 110.0;
    cfg.sweep = SweepSpec{SweepVariable::strike, 100.0, 100.0 + 1e-6, 2};
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(*rows[0].sweep_value < *rows[1].sweep_value);
    CHECK(rows[0].sweep_var == "strike");
}

TEST_CASE("fig1 preset: higher potential prices below lower potential") {
    RunConfig cfg = base_config();
    cfg.command = Command::sweep;
    cfg.preset = "fig1";
    const auto rows = run_sweep(cfg);
    // collect pso rows by (v0 -> spot -> price)
    std::map<double, std::map<double, double>> pso, pdbs;
    for (const auto& r : rows) {
        if (r.kind == "pso")
            pso[*r.v0][*r.spot] = *r.price;
        else if (r.kind == "pdbs")
            pdbs[*r.v0][*r.spot] = *r.price;
    }
    REQUIRE(pso.size() == 3);
    REQUIRE(pdbs.size() == 3);
    for (const auto& [spot, price55] : pso.at(55.0)) {
        CHECK(price55 <= pso.at(26.0).at(spot) + 1e-9);
        CHECK(pso.at(26.0).at(spot) <= pso.at(13.0).at(spot) + 1e-9);
    }
    for (const auto& [spot, price55] : pdbs.at(55.0))
        CHECK(price55 <= pdbs.at(26.0).at(spot) + 1e-9);
    // baselines are present
    bool has_uosb = false, has_sdb = false, has_vanilla = false;
    for (const auto& r : rows) {
        has_uosb = has_uosb || r.kind == "uosb";
        has_sdb = has_sdb || r.kind == "sdb";
        has_vanilla = has_vanilla || r.kind == "vanilla";
    }
    CHECK(has_uosb);
    CHECK(has_sdb);
    CHECK(has_vanilla);
}

TEST_CASE("fig3 preset: prices fall as the potential deepens") {
    RunConfig cfg = base_config();
    cfg.command = Command::sweep;
    cfg.preset = "fig3";
    const auto rows = run_sweep(cfg);
    double prev_pso = 1e300, prev_pdbs = 1e300;
    for (const auto& r : rows) {
        if (r.kind == "pso") {
            CHECK(*r.price < prev_pso);
            prev_pso = *r.price;
        } else if (r.kind == "pdbs") {
            CHECK(*r.price < prev_pdbs);
            prev_pdbs = *r.price;
        }
    }
}

TEST_CASE("tables render") {
    const std::string t1 = render_table1(OutputFormat::csv);
    CHECK(t1.find("n,low_rel_err,high_rel_err\n") == 0);
    const auto rows1 = table1_rows();
    REQUIRE(rows1.size() == 4);
    CHECK(std::fabs(rows1[0].low_rel_err - 2.14e-4) < 0.05 * 2.14e-4);
    for (std::size_t i = 1; i < rows1.size(); ++i) {
        CHECK(rows1[i].low_rel_err > rows1[i - 1].low_rel_err);
        CHECK(rows1[i].high_rel_err < rows1[i - 1].high_rel_err);
    }

    const auto rows2 = table2_rows();
    REQUIRE(rows2.size() == 3);
    CHECK(std::lround(rows2[0].beta) == 35);
    CHECK(std::lround(rows2[1].beta) == 24);
    CHECK(std::lround(rows2[2].beta) == 17);
    CHECK(rows2[0].n_max == 4);
    CHECK(rows2[1].n_max == 2);
    CHECK(rows2[2].n_max == 1);
    const std::string t2 = render_table2(OutputFormat::json);
    CHECK(t2.find("\"m_max1\"") != std::string::npos);
}

TEST_CASE("config document merge") {
    RunConfig cfg = base_config();
    apply_config_json(R"({
        "command": "sweep", "kind": "pso", "v0": 26.0, "spot": 105.0,
        "sweep": {"variable": "strike", "lo": 95.0, "hi": 115.0, "points": 3},
        "format": "json", "seed": 777, "quad": {"rel_tol": 1e-7}
    })",
                      cfg);
    CHECK(cfg.command == Command::sweep);
    CHECK(cfg.kind == OptionKind::pso_up_out);
    CHECK(cfg.v0 == 26.0);
    CHECK(cfg.spot == 105.0);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->points == 3);
    CHECK(cfg.format == OutputFormat::json);
    CHECK(cfg.paths.seed == 777);
    CHECK(cfg.quad.rel_tol == 1e-7);
    CHECK_THROWS_AS(apply_config_json(R"({"kind": "straddle"})", cfg), ParameterError);
}

TEST_CASE("output path resolution honors the environment") {
    unsetenv("STEPWELL_OUT_DIR");
    CHECK(resolve_out_path("data.csv") == "data.csv");
    CHECK(resolve_out_path("/tmp/data.csv") == "/tmp/data.csv");
    setenv("STEPWELL_OUT_DIR", "/tmp/sweeps", 1);
    CHECK(resolve_out_path("data.csv") == "/tmp/sweeps/data.csv");
    CHECK(resolve_out_path("/abs/data.csv") == "/abs/data.csv");
    unsetenv("STEPWELL_OUT_DIR");
}

TEST_CASE("greeks command emits the delta") {
    RunConfig cfg = base_config();
    cfg.command = Command::greeks;
    cfg.kind = OptionKind::vanilla;
    cfg.spot = 110.0;
    cfg.strike = 100.0;
    const auto rows = run_price(cfg);
    REQUIRE(rows.size() == 1);
    const double st = cfg.vol;
    const double d_plus = (std::log(1.1) + (cfg.rate + 0.5 * st * st)) / st;
    CHECK(std::fabs(*rows[0].price - normal_cdf(d_plus)) < 1e-4);
}

TEST_CASE("quick validation passes and is repeatable") {
    RunConfig cfg = base_config();
    cfg.command = Command::validate;
    cfg.quick = true;
    cfg.paths.n_paths = 20000;
    const ValidationReport report = run_validation(cfg);
    for (const auto& check : report.checks) {
        INFO(check.name, ": ", check.details);
        CHECK(check.passed);
    }
    CHECK(report.all_passed);
    CHECK(report.to_json() == run_validation(cfg).to_json());

    RunConfig bad = cfg;
    bad.vol = 0.0;
    CHECK_THROWS_AS(run_validation(bad), ParameterError);
}
