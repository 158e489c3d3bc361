#include "osc/error.hpp"
#include "osc/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("osc_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
    std::ifstream in(file);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

osc::ErrorKind kind_of(const std::string& text) {
    try {
        (void)osc::parse_config(text);
    } catch (const osc::Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "accepted: " << text;
    return osc::ErrorKind::Io;
}

std::string message_of(const std::string& text) {
    try {
        (void)osc::parse_config(text);
    } catch (const osc::Error& e) {
        return e.what();
    }
    return {};
}

TEST(TauRule, ParsesAllForms) {
    EXPECT_EQ(osc::TauRule::parse("h^2"), osc::TauRule::power(2.0));
    EXPECT_EQ(osc::TauRule::parse("100*h^3"), osc::TauRule::power(3.0, 100.0));
    EXPECT_EQ(osc::TauRule::parse("0.01"), osc::TauRule::constant(0.01));
    EXPECT_EQ(osc::TauRule::parse("h^((r+1)/2)"), osc::TauRule::optimal_l2());
    EXPECT_EQ(osc::TauRule::parse("h^(r/2)"), osc::TauRule::optimal_h1());
    EXPECT_EQ(osc::TauRule::parse("h^(r-1)"), osc::TauRule::superconvergent());
    EXPECT_DOUBLE_EQ(osc::TauRule::optimal_l2().resolve(0.1, 5), 1e-3);
    EXPECT_DOUBLE_EQ(osc::TauRule::superconvergent().resolve(0.5, 3), 0.25);
    EXPECT_NEAR(osc::TauRule::power(3.0, 100.0).resolve(0.05, 6), 0.0125, 1e-15);
    for (const char* bad : {"", "h", "h^-1", "x^2", "-0.1", "2*k^2"}) {
        EXPECT_THROW((void)osc::TauRule::parse(bad), osc::Error) << bad;
    }
    for (const auto& rule : {osc::TauRule::power(2.5, 3.0), osc::TauRule::constant(0.125), osc::TauRule::optimal_h1()}) {
        EXPECT_EQ(osc::TauRule::parse(rule.to_string()), rule);
    }
}

TEST(Config, MinimalExampleOneResolvesDefaults) {
    const auto c = osc::parse_config(R"({"model": "brusselator_manufactured"})");
    EXPECT_EQ(c.params.at("A"), 1.0);
    EXPECT_EQ(c.params.at("B"), 0.5);
    EXPECT_EQ(c.params.at("D1"), 1.0);
    EXPECT_EQ(c.params.at("D2"), 1.0);
    EXPECT_EQ(c.final_time, 1.0);
    EXPECT_EQ(c.degree, 3);
    EXPECT_EQ(c.domain, osc::Rectangle{});
}

TEST(Config, TauRuleResolvesOnTheMesh) {
    const auto c = osc::parse_config(R"({"model": "brusselator_manufactured", "N": 10, "tau": "h^2"})");
    const auto grid = osc::build_time_grid(c, 10);
    EXPECT_EQ(grid.steps, 100u);
    EXPECT_NEAR(grid.step(), 0.01, 1e-15);
}

TEST(Config, RejectsBadInputWithKeyPath) {
    EXPECT_EQ(kind_of(R"({"model": "brusselator", "degree": 7})"), osc::ErrorKind::Config);
    EXPECT_NE(message_of(R"({"model": "brusselator", "degree": 7})").find("config.degree"), std::string::npos);
    EXPECT_NE(message_of(R"({"model": "brusselator", "degree": 7})").find("[3, 6]"), std::string::npos);
    EXPECT_NE(message_of(R"({"model": "nope"})").find("config.model"), std::string::npos);
    EXPECT_NE(message_of(R"({"model": "brusselator", "params": {"C": 1}})").find("config.params.C"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"model": "brusselator", "N": [10, 0]})").find("config.N[1]"), std::string::npos);
    EXPECT_NE(message_of(R"({"model": "brusselator", "tau": "h^"})").find("config.tau"), std::string::npos);
    EXPECT_NE(message_of(R"({"model": "brusselator", "final_time": 0})").find("config.final_time"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"model": "brusselator", "snapshots": [6]})").find("config.snapshots[0]"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"model": "brusselator", "initial": "spike"})").find("config.initial"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"model": "brusselator", "colour": 1})").find("config.colour"), std::string::npos);
    EXPECT_NE(message_of(R"({"model": "brusselator", "domain": [1, 0, 0, 1]})").find("config.domain"),
              std::string::npos);
    EXPECT_EQ(kind_of("{not json"), osc::ErrorKind::Config);
    EXPECT_EQ(kind_of("[1, 2]"), osc::ErrorKind::Config);
}

TEST(Config, SerializeRoundTrips) {
    const auto c = osc::parse_config(R"({
        "model": "schnakenberg", "params": {"gamma": 10000, "a": -0.887757, "b": 2.774242},
        "initial": "harmonics", "N": [10, 20], "degree": 6, "tau": "100*h^3",
        "final_time": 5, "snapshots": [0, 0.5, 5], "output": "o", "workers": 2, "resolution": 51})");
    EXPECT_EQ(osc::parse_config(osc::serialize(c)), c);
    const auto d = osc::parse_config(R"js({"model": "gierer_meinhardt", "tau": "h^((r+1)/2)", "N": 7})js");
    EXPECT_EQ(osc::parse_config(osc::serialize(d)), d);
}

TEST(Config, LoadReportsMissingFileAsIo) {
    try {
        (void)osc::load_config("/nonexistent/osc/config.json");
        FAIL();
    } catch (const osc::Error& e) {
        EXPECT_EQ(e.kind(), osc::ErrorKind::Io);
        EXPECT_EQ(osc::exit_code(e.kind()), 6);
    }
}

TEST(Tables, RegistryCouplingsFollowTheNorm) {
    const auto& reg = osc::table_registry();
    EXPECT_EQ(reg.size(), 12u);
    EXPECT_THROW((void)osc::find_table("T9"), osc::Error);
    for (const char* id : {"T1", "T3", "T5", "T7", "T10", "T12"}) {
        EXPECT_EQ(osc::find_table(id).coupling, osc::TauRule::optimal_l2()) << id;
    }
    for (const char* id : {"T2", "T6", "T11"}) EXPECT_EQ(osc::find_table(id).coupling, osc::TauRule::optimal_h1()) << id;
    for (const char* id : {"T4", "T8", "T13"}) {
        EXPECT_EQ(osc::find_table(id).coupling, osc::TauRule::superconvergent()) << id;
        EXPECT_TRUE(osc::find_table(id).nodal());
    }
    EXPECT_EQ(osc::find_table("T5").params.at("D1"), 0.001);
    EXPECT_EQ(osc::find_table("T8").params.at("D1"), 1.0);
    for (const auto& t : reg) {
        EXPECT_FALSE(t.published.empty()) << t.id;
        for (const auto& row : t.published) EXPECT_GT(row.errors[0][0], 0.0) << t.id;
    }
}

TEST(Tables, SingleDegreeReproductionAndCsv) {
    osc::TableOptions opts;
    opts.degrees = {3};
    std::size_t rows = 0;
    opts.on_row = [&](const osc::TableRowResult&) { ++rows; };
    const auto result = osc::reproduce_table(osc::find_table("T1"), opts);
    ASSERT_EQ(result.rows.size(), 3u);
    EXPECT_EQ(rows, 3u);
    EXPECT_TRUE(std::isnan(result.rows[0].rates[0]));
    EXPECT_NEAR(result.rows[1].rates[0], 4.014, 0.01);
    EXPECT_NEAR(result.rows[2].rates[0], 4.007, 0.01);
    std::ostringstream csv;
    osc::write_table_csv(result, csv);
    const auto text = csv.str();
    EXPECT_EQ(text.rfind("r,N,e1,e2,rate", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Tables, SchnakenbergMaximumNormRate) {
    const auto& table = osc::find_table("T12");
    const auto a = osc::run_table_row(table, 4, 16);
    const auto b = osc::run_table_row(table, 4, 25);
    const double r = osc::rate(a.combined[0], a.h, b.combined[0], b.h);
    EXPECT_NEAR(r, 4.998, 0.05);
}

TEST(Grid, ConstantSplineOnThreeByThree) {
    auto m = osc::brusselator(1.0, 2.0, 1.0, 1.0);
    m.initial = [](double, double) { return osc::State{2.0, 0.5}; };
    const auto mesh = osc::Mesh2D::uniform({}, 2, 2, 3);
    const osc::AdiSolver solver(m, mesh, osc::TimeGrid(1.0, 1));
    const auto spline = solver.finalize(solver.step1a().first);
    std::ostringstream out;
    osc::emit_solution_grid(spline, 3, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x,y,u1,u2");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    ASSERT_EQ(rows.size(), 9u);
    EXPECT_EQ(rows.front(), "0,0,2,0.5");
    EXPECT_EQ(rows[1], "0.5,0,2,0.5");
    EXPECT_EQ(rows.back(), "1,1,2,0.5");
    EXPECT_THROW(osc::emit_solution_grid(spline, 1, out), osc::Error);
    const auto stats = osc::lattice_stats(spline, 3);
    EXPECT_NEAR(stats[0].mean, 2.0, 1e-13);
    EXPECT_NEAR(stats[1].max, 0.5, 1e-13);
}

TEST(Grid, HundredOnePointsOnSymmetricSquare) {
    auto m = osc::gray_scott(1.0, 0.0, 0.001, 0.001);
    m.initial = [](double x, double y) { return osc::State{x, y}; };
    const auto mesh = osc::Mesh2D::uniform({-1.0, 1.0, -1.0, 1.0}, 4, 4, 3);
    const osc::AdiSolver solver(m, mesh, osc::TimeGrid(1.0, 1));
    const auto spline = solver.finalize(solver.step1a().first);
    std::ostringstream out;
    osc::emit_solution_grid(spline, 101, out);
    std::istringstream in(out.str());
    std::vector<std::string> rows;
    for (std::string line; std::getline(in, line);) rows.push_back(line);
    ASSERT_EQ(rows.size(), 10202u);
    EXPECT_EQ(rows[1].substr(0, 6), "-1,-1,");
    EXPECT_EQ(rows[101].substr(0, 5), "1,-1,");
    EXPECT_EQ(rows[10101].substr(0, 5), "-1,1,");
    EXPECT_EQ(rows[10201].substr(0, 4), "1,1,");
}

TEST(Grid, BreakpointSamplesMatchNodalValues) {
    const auto& entry = osc::find_model("brusselator_manufactured");
    const auto m = entry.build(entry.defaults, "exact", entry.domain);
    const auto mesh = osc::Mesh2D::uniform({}, 4, 4, 3);
    const auto result = osc::AdiSolver(m, mesh, osc::TimeGrid(1.0, 16)).run();
    std::ostringstream out;
    osc::emit_solution_grid(result.solution, 5, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    for (std::size_t j = 0; j < 5; ++j) {
        for (std::size_t i = 0; i < 5; ++i) {
            std::getline(in, line);
            double x, y, u1, u2;
            char comma;
            std::istringstream row(line);
            row >> x >> comma >> y >> comma >> u1 >> comma >> u2;
            EXPECT_DOUBLE_EQ(x, 0.25 * i);
            const std::size_t cx = i == 0 ? 0 : i - 1;
            const std::size_t cy = j == 0 ? 0 : j - 1;
            EXPECT_NEAR(u1, result.solution.value_in_cell(0, cx, cy, x, y), 1e-12);
            EXPECT_NEAR(u2, result.solution.value_in_cell(1, cx, cy, x, y), 1e-12);
        }
    }
}

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(osc::format_number(0.1), "0.1");
    EXPECT_EQ(osc::format_number(2.0), "2");
    EXPECT_EQ(osc::format_number(1e-20), "1e-20");
    EXPECT_EQ(std::stod(osc::format_number(1.0 / 3.0)), 1.0 / 3.0);
    EXPECT_FALSE(osc::version().empty());
}

TEST(Scenarios, RegistryCoversElevenExamples) {
    const auto& reg = osc::scenario_registry();
    ASSERT_EQ(reg.size(), 11u);
    for (const auto& s : reg) {
        const auto& entry = osc::find_model(s.model);
        for (const auto& [k, v] : s.params) EXPECT_TRUE(entry.defaults.contains(k)) << s.name << " " << k;
        EXPECT_GE(s.degree, 3);
        EXPECT_LE(s.degree, 6);
    }
    EXPECT_EQ(osc::find_scenario("example5").params.at("kappa"), 0.0128);
    EXPECT_EQ(osc::find_scenario("example6").params.at("kappa"), 0.0152);
    EXPECT_EQ(osc::find_scenario("example7").model, "gierer_meinhardt_eps2");
    EXPECT_EQ(osc::find_scenario("example10").degree, 5);
    EXPECT_EQ(osc::find_scenario("example11").degree, 6);
    EXPECT_EQ(osc::find_scenario("example11").tau, osc::TauRule::power(3.0, 100.0));
    EXPECT_THROW((void)osc::find_scenario("example12"), osc::Error);
}

TEST(Scenarios, SmokeScalesLongRunsOnly) {
    const auto& s5 = osc::find_scenario("example5");
    const auto times = osc::scenario_times(s5, 90.0, true);
    EXPECT_EQ(times, (std::vector<double>{0.0, 32.0, 34.0, 42.0, 90.0}));
    osc::ScenarioOptions opts;
    opts.smoke = true;
    EXPECT_DOUBLE_EQ(osc::scenario_config(s5, opts).final_time, 90.0);
    EXPECT_DOUBLE_EQ(osc::scenario_config(osc::find_scenario("example2"), opts).final_time, 5.0);
    opts.final_time = 10.0;
    const auto clipped = osc::scenario_config(s5, opts);
    EXPECT_EQ(clipped.snapshot_times, (std::vector<double>{0.0, 10.0}));
}

TEST(Scenarios, ExampleOneWritesOutputs) {
    osc::ScenarioOptions opts;
    opts.output = scratch_dir("example1");
    opts.resolution = 11;
    const auto result = osc::run_scenario(osc::find_scenario("example1"), opts);
    const auto dir = opts.output / "example1";
    EXPECT_TRUE(std::filesystem::exists(dir / "metadata.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "errors.csv"));
    EXPECT_EQ(read_lines(dir / "snapshot_t1.csv").size(), 122u);
    EXPECT_EQ(read_lines(dir / "summary.csv").size(), 3u);
    ASSERT_EQ(result.snapshots.size(), 2u);
    EXPECT_NEAR(result.snapshots[0].stats[0].max, 1.0, 1e-3);  // interpolant of the data
    std::filesystem::remove_all(opts.output);
}

TEST(Scenarios, ExampleThreeTracesOscillate) {
    osc::ScenarioOptions opts;
    opts.output = scratch_dir("example3");
    opts.resolution = 5;
    opts.final_time = 20.0;
    const auto result = osc::run_scenario(osc::find_scenario("example3"), opts);
    ASSERT_GT(result.traces.size(), 150u);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& [t, values] : result.traces) {
        if (t < 10.0) continue;
        lo = std::min(lo, values[0][0]);
        hi = std::max(hi, values[0][0]);
    }
    EXPECT_GT(hi - lo, 0.5);
    EXPECT_EQ(read_lines(opts.output / "example3" / "traces.csv").size(), result.traces.size() + 1);
    std::filesystem::remove_all(opts.output);
}

TEST(Runs, ConfigAndSweepOutputs) {
    const auto dir = scratch_dir("sweep");
    auto c = osc::parse_config(R"({"model": "brusselator_manufactured", "N": [4, 8], "tau": "h^2",
                                   "snapshots": [0.5], "resolution": 4})");
    c.output = dir.string();
    const auto outcomes = osc::run_sweep(c);
    ASSERT_EQ(outcomes.size(), 2u);
    ASSERT_TRUE(outcomes[1].errors.has_value());
    EXPECT_LT(osc::combined_error(*outcomes[1].errors, osc::NormKind::L2),
              osc::combined_error(*outcomes[0].errors, osc::NormKind::L2));
    EXPECT_EQ(read_lines(dir / "sweep.csv").size(), 3u);
    EXPECT_EQ(read_lines(dir / "N8" / "solution.csv").size(), 17u);
    EXPECT_TRUE(std::filesystem::exists(dir / "N8" / "snapshot_t0.5.csv"));
    EXPECT_EQ(read_lines(dir / "N8" / "summary.csv").size(), 3u);

    // Bitwise identical files for a second run with more workers.
    auto again = c;
    again.cells = {8};
    again.workers = 3;
    again.output = (dir / "again").string();
    (void)osc::run_config(again);
    EXPECT_EQ(read_lines(dir / "N8" / "solution.csv"), read_lines(dir / "again" / "solution.csv"));
    std::filesystem::remove_all(dir);
}

}  // namespace
