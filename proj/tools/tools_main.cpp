// Command-line front end: single runs, N sweeps, convergence tables and
// the named scenarios.

#include "osc/error.hpp"
#include "osc/experiments.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

void warn(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }

void print_row(const osc::TableRowResult& row, const osc::TableDefinition& table) {
    std::cout << "r=" << row.degree << " N=" << std::setw(3) << row.cells;
    if (row.failure) {
        std::cout << "  FAILED: " << *row.failure << '\n';
        return;
    }
    const auto cols = table.columns();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        std::cout << "  " << osc::to_string(cols[k]) << " " << std::scientific << std::setprecision(3)
                  << row.report.component(0, cols[k]) << " " << row.report.component(1, cols[k]);
        if (!std::isnan(row.rates[k])) std::cout << " rate " << std::fixed << std::setprecision(3) << row.rates[k];
    }
    std::cout << std::defaultfloat << "  (" << row.steps << " steps, " << std::setprecision(3) << row.seconds
              << " s)\n";
}

int run_table(const std::string& id, const std::vector<int>& degrees, const std::string& out, std::size_t workers) {
    const auto& table = osc::find_table(id);
    std::cout << table.id << ": " << table.title << '\n';
    osc::TableOptions opts;
    opts.degrees = degrees;
    opts.workers = workers;
    opts.warn = warn;
    opts.on_row = [&](const osc::TableRowResult& row) { print_row(row, table); };
    const auto result = osc::reproduce_table(table, opts);
    std::filesystem::create_directories(out);
    const auto file = std::filesystem::path(out) / (table.id + ".csv");
    std::ofstream csv(file);
    if (!csv) throw osc::Error(osc::ErrorKind::Io, "cannot open " + file.string());
    osc::write_table_csv(result, csv);
    std::cout << "wrote " << file.string() << '\n';
    for (const auto& row : result.rows) {
        if (row.failure) return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reaction-diffusion solver: orthogonal spline collocation in space, ADI extrapolated "
                 "Crank-Nicolson in time"};
    app.set_version_flag("--version", std::string(osc::version()));
    app.require_subcommand(1);

    std::string out;
    std::size_t workers = 0;
    std::size_t resolution = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out, "Output directory");
        sub->add_option("--workers", workers, "Worker threads for the line solves")->check(CLI::PositiveNumber);
        sub->add_option("--resolution", resolution, "Points per axis of the output lattice")
            ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    };

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a JSON configuration");
    run->add_option("config", config_path, "Configuration file")->required();
    add_common(run);

    auto* sweep = app.add_subcommand("sweep", "Run every N of a configuration and report rates");
    sweep->add_option("config", config_path, "Configuration file")->required();
    add_common(sweep);

    std::string table_id;
    std::vector<int> degrees;
    auto* table = app.add_subcommand("table", "Reproduce a convergence table (T1..T8, T10..T13)");
    table->add_option("id", table_id, "Table id")->required();
    table->add_option("--degree", degrees, "Restrict to these degrees");
    add_common(table);

    std::string scenario_name;
    bool smoke = false;
    double final_time = 0.0;
    auto* scenario = app.add_subcommand("scenario", "Run a named example (example1..example11)");
    scenario->add_option("name", scenario_name, "Scenario name")->required();
    scenario->add_flag("--smoke", smoke, "Shorten long runs tenfold");
    scenario->add_option("--final-time", final_time, "Override the final time")->check(CLI::PositiveNumber);
    add_common(scenario);

    auto* list = app.add_subcommand("list", "List models, tables and scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*run || *sweep) {
            auto config = osc::load_config(config_path);
            if (!out.empty()) config.output = out;
            if (workers) config.workers = workers;
            if (resolution) config.resolution = resolution;
            if (*run) {
                const auto outcome = osc::run_config(config, warn);
                std::cout << "N=" << outcome.cells << " steps=" << outcome.time.steps << " tau=" << outcome.time.step()
                          << " seconds=" << outcome.result.seconds << '\n';
                if (outcome.errors) {
                    for (auto k : {osc::NormKind::L2, osc::NormKind::H1, osc::NormKind::Linf}) {
                        std::cout << osc::to_string(k) << ": " << outcome.errors->component(0, k) << ' '
                                  << outcome.errors->component(1, k) << '\n';
                    }
                }
            } else {
                const auto outcomes = osc::run_sweep(config, warn);
                for (const auto& o : outcomes) {
                    std::cout << "N=" << o.cells << " steps=" << o.time.steps;
                    if (o.errors) std::cout << " l2=" << osc::combined_error(*o.errors, osc::NormKind::L2);
                    std::cout << '\n';
                }
            }
            std::cout << "output in " << config.output << '\n';
        } else if (*table) {
            return run_table(table_id, degrees, out.empty() ? "out" : out, workers ? workers : 1);
        } else if (*scenario) {
            osc::ScenarioOptions opts;
            if (!out.empty()) opts.output = out;
            if (workers) opts.workers = workers;
            if (resolution) opts.resolution = resolution;
            opts.smoke = smoke;
            if (final_time > 0.0) opts.final_time = final_time;
            opts.warn = warn;
            const auto& sc = osc::find_scenario(scenario_name);
            std::cout << sc.name << ": " << sc.description << '\n';
            const auto result = osc::run_scenario(sc, opts);
            for (const auto& s : result.snapshots) {
                std::cout << "t=" << s.time << "  u1 in [" << s.stats[0].min << ", " << s.stats[0].max << "]  u2 in ["
                          << s.stats[1].min << ", " << s.stats[1].max << "]\n";
            }
            std::cout << "output in " << result.config.output << " (" << result.seconds << " s)\n";
        } else if (*list) {
            std::cout << "models:\n";
            for (const auto& m : osc::model_registry()) std::cout << "  " << m.name << "  " << m.description << '\n';
            std::cout << "tables:\n";
            for (const auto& t : osc::table_registry()) std::cout << "  " << t.id << "  " << t.title << '\n';
            std::cout << "scenarios:\n";
            for (const auto& s : osc::scenario_registry()) {
                std::cout << "  " << s.name << "  " << s.description << '\n';
            }
        }
    } catch (const osc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return osc::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
