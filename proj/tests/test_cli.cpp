#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cavitycat/cli.hpp"

using namespace cavitycat;
using namespace cavitycat::cli;

namespace {

std::string fixture(const std::string& name) { return std::string(CAVITYCAT_FIXTURES) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CAVITYCAT_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t column(const Table& t, const std::string& name) {
    return static_cast<std::size_t>(std::find(t.columns.begin(), t.columns.end(), name) - t.columns.begin());
}

json base_doc() {
    return json::parse(slurp(fixture("run_master_case_a.json")));
}

}  // namespace

TEST(ParseConfig, AcceptsFixtures) {
    const auto c = load_config(fixture("run_master_case_a.json"));
    EXPECT_EQ(c.protocol_case, "a");
    EXPECT_EQ(c.points, 101);
    const auto m = load_config(fixture("run_micro_case_b.json"));
    ASSERT_TRUE(m.dispersive.has_value());
    EXPECT_DOUBLE_EQ(m.phi, 1.0);
    EXPECT_EQ(m.bath->modes, 41);
    EXPECT_NO_THROW(load_config(fixture("compare_flat_band.json"), ConfigMode::Compare));
}

TEST(ParseConfig, RejectsSchemaViolationsWithFieldPath) {
    auto expect_field = [](const json& doc, const std::string& field) {
        try {
            parse_config(doc);
            ADD_FAILURE() << "accepted invalid config for " << field;
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.field(), field);
        }
    };
    json d = base_doc();
    d["alpha0"]["scale"] = 1.0;
    expect_field(d, "alpha0.scale");

    d = base_doc();
    d.erase("time");
    expect_field(d, "time");

    d = base_doc();
    d["engine"] = "microscopic";
    expect_field(d, "bath");

    d = base_doc();
    d["bath"] = {{"modes", 41}, {"half_bandwidth", 10.0}, {"gamma", 1.0}};
    expect_field(d, "bath");

    d = base_doc();
    d["engine"] = "fock";
    d["fock"] = {{"n_max", 5}, {"dt", 1e-6}};
    expect_field(d, "fock.n_max");

    d = base_doc();
    d["engine"] = "fock";
    d["fock"] = {{"n_max", 30}, {"dt", 1e-3}};
    expect_field(d, "fock.dt");

    d = base_doc();
    d["time"]["points"] = 1;
    expect_field(d, "time.points");

    d = base_doc();
    d["output"]["format"] = "xml";
    expect_field(d, "output.format");

    d = base_doc();
    d["case"] = "c";
    expect_field(d, "case");

    d = base_doc();
    d["phi"] = {{"rabi", 1.0}, {"detuning", 0.0}, {"t_int", 1.0}};
    expect_field(d, "phi.detuning");
}

TEST(RunCommand, MasterCaseAFixture) {
    std::ostringstream err;
    ASSERT_EQ(run_command(fixture("run_master_case_a.json"), err), Ok) << err.str();
    const Table t = read_table("csv", "run_master_case_a.csv");
    ASSERT_EQ(t.rows.size(), 101u);
    EXPECT_EQ(t.columns, row_columns());
    const auto eta = column(t, "eta");
    EXPECT_NEAR(t.rows[0][eta], 1.0, 1e-9);
    for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_LT(t.rows[i][eta], t.rows[i - 1][eta]);
    const double a2 = 2.0;
    for (const auto& r : t.rows) {
        EXPECT_NEAR(r[eta], std::exp(-2.0 * a2 * (1.0 - std::exp(-r[0]))), 0.02);
    }
}

TEST(RunCommand, Deterministic) {
    for (const char* name : {"run_master_case_a", "run_micro_case_b", "run_fock_case_a"}) {
        const std::string cfg = fixture(std::string(name) + ".json");
        const auto c = load_config(cfg);
        ASSERT_EQ(run_command(cfg), Ok) << name;
        const std::string first = slurp(c.path);
        ASSERT_EQ(run_command(cfg), Ok) << name;
        EXPECT_EQ(first, slurp(c.path)) << name;
        EXPECT_FALSE(first.empty());
    }
}

TEST(RunCommand, JsonOutputRoundTrips) {
    ASSERT_EQ(run_command(fixture("run_micro_case_b.json")), Ok);
    const json arr = json::parse(slurp("run_micro_case_b.json"));
    ASSERT_EQ(arr.size(), 21u);
    EXPECT_TRUE(arr[0].at("recurrence_warning").is_boolean());
    EXPECT_DOUBLE_EQ(arr[0].at("t").get<double>(), 0.0);
}

TEST(RunCommand, CsvDoublesRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 2.718281828459045, 1e-300, -7.25e12}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}

TEST(RunCommand, ExitCodes) {
    std::ostringstream err;
    EXPECT_EQ(run_command(fixture("bad_missing_bath.json"), err), ConfigInvalid);
    EXPECT_NE(err.str().find("bad_missing_bath.json"), std::string::npos);
    EXPECT_NE(err.str().find("'bath'"), std::string::npos);
    EXPECT_EQ(run_command(fixture("bad_unknown_key.json")), ConfigInvalid);
    EXPECT_EQ(run_command(fixture("zero_state.json")), ZeroState);
    EXPECT_EQ(run_command(fixture("degenerate_span.json")), Positivity);
    EXPECT_EQ(run_command(fixture("unwritable_output.json")), IoFailure);
    EXPECT_EQ(run_command(fixture("does_not_exist.json")), ConfigInvalid);
}

TEST(CompareCommand, FlatBandFixture) {
    std::ostringstream err;
    ASSERT_EQ(compare_command(fixture("compare_flat_band.json"), err), Ok) << err.str();
    const Table t = read_table("csv", "compare_flat_band.csv");
    EXPECT_EQ(t.rows.size(), 81u);
    EXPECT_LT(column(t, "eta_micro"), t.columns.size());
    EXPECT_LT(column(t, "eta_me"), t.columns.size());
    const json s = json::parse(slurp(summary_path("compare_flat_band.csv")));
    EXPECT_GT(s.at("recurrence_warning_rows").get<int>(), 0);
    EXPECT_NEAR(s.at("short_time_slope_defect_e_micro").get<double>(), 2.0, 0.1);
    EXPECT_NEAR(s.at("short_time_slope_defect_e_me").get<double>(), 1.0, 0.1);
    EXPECT_TRUE(s.contains("max_abs_eta_gap_t_0p1_to_2"));

    // The run config has no master section, so compare must reject it.
    EXPECT_EQ(compare_command(fixture("run_micro_case_b.json")), ConfigInvalid);
}

TEST(SweepCommand, PhiCaseB) {
    std::ostringstream err;
    const std::string values = std::to_string(std::numbers::pi / 2.0) + "," + std::to_string(std::numbers::pi / 8.0) +
                               "," + std::to_string(std::numbers::pi / 4.0);
    ASSERT_EQ(sweep_command(fixture("sweep_phi_case_b.json"), "phi", values, err), Ok) << err.str();
    const Table t = read_table("csv", "sweep_phi_case_b.csv");
    ASSERT_EQ(t.columns.front(), "phi");
    ASSERT_EQ(t.rows.size(), 18u);
    // Sorted ascending by value; eta at the first positive time falls as sin^2(phi) grows.
    const auto eta = column(t, "eta");
    std::vector<double> early;
    for (std::size_t v = 0; v < 3; ++v) early.push_back(t.rows[v * 6 + 1][eta]);
    EXPECT_GT(early[0], early[1]);
    EXPECT_GT(early[1], early[2]);
    EXPECT_LT(t.rows[0][0], t.rows[6][0]);
}

TEST(SweepCommand, Errors) {
    EXPECT_EQ(sweep_command(fixture("sweep_phi_case_b.json"), "omega", "1,2"), ConfigInvalid);
    EXPECT_EQ(sweep_command(fixture("sweep_phi_case_b.json"), "phi", ""), ConfigInvalid);
    EXPECT_EQ(sweep_command(fixture("sweep_phi_case_b.json"), "phi", "0.3,abc"), ConfigInvalid);
}

TEST(Executable, ParseErrorsAndSuccess) {
    EXPECT_EQ(run_cli(""), ConfigInvalid);
    EXPECT_EQ(run_cli("run"), ConfigInvalid);
    EXPECT_EQ(run_cli("launch --config x"), ConfigInvalid);
    EXPECT_EQ(run_cli("run --config " + fixture("run_master_case_a.json")), Ok);
    EXPECT_EQ(run_cli("run --config " + fixture("zero_state.json")), ZeroState);
    EXPECT_EQ(run_cli("--help"), Ok);
}
