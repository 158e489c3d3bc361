#pragma once

/// @file experiments.hpp
/// @brief Run configuration, convergence tables, named scenarios and CSV output.

#include "osc/adi.hpp"
#include "osc/error_analysis.hpp"
#include "osc/field.hpp"
#include "osc/models.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace osc {

/// tau = scale * h^(exponent + exponent_per_degree * r), or a fixed value.
struct TauRule {
    bool fixed = false;
    double value = 0.0;  // used when fixed
    double scale = 1.0;
    double exponent = 2.0;
    double exponent_per_degree = 0.0;

    /// Accepts a number, "h^p", "c*h^p", and the degree forms "h^((r+1)/2)",
    /// "h^(r/2)", "h^(r-1)", each optionally prefixed by "c*".
    /// @throws Error(Config) on anything else.
    static TauRule parse(std::string_view text);
    static TauRule constant(double tau);
    static TauRule power(double exponent, double scale = 1.0);
    /// h^((r+1)/2), h^(r/2), h^(r-1).
    static TauRule optimal_l2();
    static TauRule optimal_h1();
    static TauRule superconvergent();

    [[nodiscard]] double resolve(double h, int degree) const;
    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const TauRule&, const TauRule&) = default;
};

/// Validated configuration of a single run or an N sweep.
struct RunConfig {
    std::string model;
    std::map<std::string, double> params;  // all parameters, defaults resolved
    std::string initial;
    Rectangle domain;
    std::vector<std::size_t> cells{10};  // N per direction; several for a sweep
    int degree = 3;
    TauRule tau = TauRule::power(2.0);
    double final_time = 1.0;
    std::vector<double> snapshot_times;
    std::string output = "out";
    std::size_t workers = 1;
    std::size_t resolution = 101;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the JSON configuration document. Keys: model (required), params,
/// initial, domain [x0, x1, y0, y1], N (integer or list), degree, tau,
/// final_time, snapshots, output, workers, resolution.
/// @throws Error(Config) with the offending key path.
[[nodiscard]] RunConfig parse_config(std::string_view text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
[[nodiscard]] std::string serialize(const RunConfig& config);

[[nodiscard]] ReactionModel build_model(const RunConfig& config);
[[nodiscard]] Mesh2D build_mesh(const RunConfig& config, std::size_t cells);
[[nodiscard]] TimeGrid build_time_grid(const RunConfig& config, std::size_t cells);

// ---------------------------------------------------------------------------
// Convergence tables

/// Published errors of one table row. Nodal tables fill all three column
/// groups (value, d/dx, d/dy); other tables only the first. Rates are NaN on
/// the first row of each degree.
struct PublishedRow {
    int degree = 0;
    std::size_t cells = 0;
    std::array<std::array<double, 2>, 3> errors{};
    std::array<double, 3> rates{};
};

struct TableDefinition {
    std::string id;  // "T1" .. "T13"
    std::string title;
    std::string model;
    std::map<std::string, double> params;  // overrides of the registry defaults
    NormKind norm = NormKind::L2;          // NodalValue marks a nodal table
    TauRule coupling;
    double final_time = 1.0;
    std::vector<PublishedRow> published;

    [[nodiscard]] bool nodal() const noexcept { return norm == NormKind::NodalValue; }
    [[nodiscard]] std::vector<NormKind> columns() const;
    [[nodiscard]] std::vector<int> degrees() const;
};

[[nodiscard]] const std::vector<TableDefinition>& table_registry();
/// @throws Error(Config) for unknown ids (including "T9").
[[nodiscard]] const TableDefinition& find_table(std::string_view id);

struct TableRowResult {
    int degree = 0;
    std::size_t cells = 0;
    double h = 0.0;
    double tau = 0.0;
    std::size_t steps = 0;
    double seconds = 0.0;
    ErrorReport report;
    std::vector<double> combined;  // per column
    std::vector<double> rates;     // per column, NaN on the first row of a degree
    std::optional<std::string> failure;
};

struct TableOptions {
    std::vector<int> degrees;  // empty: all
    std::size_t workers = 1;
    std::function<void(const TableRowResult&)> on_row;
    std::function<void(std::string_view)> warn;
};

struct TableResult {
    const TableDefinition* table = nullptr;
    std::vector<TableRowResult> rows;
};

/// Runs every row of the table. A row whose run throws is kept with its
/// failure message and breaks the rate chain.
[[nodiscard]] TableResult reproduce_table(const TableDefinition& table, const TableOptions& options = {});
[[nodiscard]] TableRowResult run_table_row(const TableDefinition& table, int degree, std::size_t cells,
                                           std::size_t workers = 1);
/// Header "r,N,e1,e2,rate" followed by further column groups, the step data
/// and the published values.
void write_table_csv(const TableResult& result, std::ostream& out);

// ---------------------------------------------------------------------------
// Scenarios

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Scenario {
    std::string name;
    std::string description;
    std::string model;
    std::map<std::string, double> params;
    std::string initial;
    std::size_t cells = 10;
    int degree = 3;
    TauRule tau;
    double final_time = 1.0;
    std::vector<double> snapshot_times;
    std::vector<Point2> trace_points;
    double trace_interval = 0.0;
    /// Long pattern-formation runs honor --smoke (T and snapshot times / 10).
    bool long_running = false;
};

[[nodiscard]] const std::vector<Scenario>& scenario_registry();
/// @throws Error(Config) for unknown names.
[[nodiscard]] const Scenario& find_scenario(std::string_view name);

struct ComponentStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

struct SnapshotSummary {
    double time = 0.0;
    std::array<ComponentStats, 2> stats;
    std::filesystem::path file;
};

struct ScenarioOptions {
    std::filesystem::path output = "out";
    std::size_t workers = 1;
    std::size_t resolution = 101;
    bool smoke = false;
    std::optional<double> final_time;
    std::function<void(std::string_view)> warn;
};

struct ScenarioResult {
    RunConfig config;
    std::vector<SnapshotSummary> snapshots;
    /// (t, u at each trace point) rows.
    std::vector<std::pair<double, std::vector<State>>> traces;
    Spline2D solution;
    double seconds = 0.0;
};

/// Snapshot times after smoke scaling and clipping to the final time. The
/// final time is always included.
[[nodiscard]] std::vector<double> scenario_times(const Scenario& scenario, double final_time, bool smoke);
[[nodiscard]] RunConfig scenario_config(const Scenario& scenario, const ScenarioOptions& options);

/// Writes snapshot_<t>.csv per snapshot, summary.csv, traces.csv (when the
/// scenario has trace points) and metadata.json under output/name.
[[nodiscard]] ScenarioResult run_scenario(const Scenario& scenario, const ScenarioOptions& options);

// ---------------------------------------------------------------------------
// Plain runs and sweeps

struct RunOutcome {
    std::size_t cells = 0;
    TimeGrid time;
    RunResult result;
    std::optional<ErrorReport> errors;
};

/// Single run with cells = config.cells.front(); writes solution.csv,
/// snapshot files, summary.csv, errors.csv (manufactured models) and
/// metadata.json into config.output.
[[nodiscard]] RunOutcome run_config(const RunConfig& config, std::function<void(std::string_view)> warn = {});

/// Runs every N of the config; for manufactured models writes sweep.csv with
/// all norms and rates.
[[nodiscard]] std::vector<RunOutcome> run_sweep(const RunConfig& config,
                                                std::function<void(std::string_view)> warn = {});

// ---------------------------------------------------------------------------
// Output helpers

/// Lattice of resolution x resolution points including the boundary, rows
/// ordered by y then x. Header "x,y,u1,u2".
/// @throws Error(Config) for resolution < 2.
void emit_solution_grid(const Spline2D& spline, std::size_t resolution, std::ostream& out);
[[nodiscard]] std::array<ComponentStats, 2> lattice_stats(const Spline2D& spline, std::size_t resolution);
/// Shortest round-trip decimal form.
[[nodiscard]] std::string format_number(double value);
/// Library version string.
[[nodiscard]] std::string_view version() noexcept;

}  // namespace osc
