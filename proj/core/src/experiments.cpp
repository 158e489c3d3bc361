#include "osc/experiments.hpp"

#include "osc/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#ifndef OSC_VERSION
#define OSC_VERSION "0.0.0"
#endif

namespace osc {

using nlohmann::json;

namespace {

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::string strip_spaces(std::string_view s) {
    std::string out;
    for (char ch : s) {
        if (ch != ' ' && ch != '\t') out.push_back(ch);
    }
    return out;
}

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::Config, path + ": " + what);
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_output(const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + file.string() + " for writing");
    return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& file) {
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "failed writing " + file.string());
}

json config_to_json(const RunConfig& c) {
    json j;
    j["model"] = c.model;
    j["params"] = c.params;
    j["initial"] = c.initial;
    j["domain"] = {c.domain.x0, c.domain.x1, c.domain.y0, c.domain.y1};
    j["N"] = c.cells;
    j["degree"] = c.degree;
    j["tau"] = c.tau.to_string();
    j["final_time"] = c.final_time;
    j["snapshots"] = c.snapshot_times;
    j["output"] = c.output;
    j["workers"] = c.workers;
    j["resolution"] = c.resolution;
    return j;
}

constexpr std::string_view kNotFinite =
    "solution is not finite; the step may exceed the stability limit of the extrapolated kinetics";

std::string snapshot_name(double t) { return "snapshot_t" + format_number(t) + ".csv"; }

void write_summary(const std::filesystem::path& file, const std::vector<SnapshotSummary>& snaps) {
    auto out = open_output(file);
    out << "t,u1_min,u1_max,u1_mean,u2_min,u2_max,u2_mean\n";
    for (const auto& s : snaps) {
        out << format_number(s.time);
        for (const auto& st : s.stats) {
            out << ',' << format_number(st.min) << ',' << format_number(st.max) << ',' << format_number(st.mean);
        }
        out << '\n';
    }
    close_output(out, file);
}

void write_errors(const std::filesystem::path& file, const ErrorReport& rep) {
    auto out = open_output(file);
    out << "norm,e1,e2,combined\n";
    for (NormKind k : {NormKind::L2, NormKind::H1, NormKind::Linf, NormKind::NodalValue, NormKind::NodalDx,
                       NormKind::NodalDy}) {
        out << to_string(k) << ',' << format_number(rep.component(0, k)) << ','
            << format_number(rep.component(1, k)) << ',' << format_number(combined_error(rep, k)) << '\n';
    }
    close_output(out, file);
}

json report_to_json(const ErrorReport& rep) {
    json j;
    for (NormKind k : {NormKind::L2, NormKind::H1, NormKind::Linf, NormKind::NodalValue, NormKind::NodalDx,
                       NormKind::NodalDy}) {
        j[std::string(to_string(k))] = {rep.component(0, k), rep.component(1, k)};
    }
    return j;
}

json environment_json() {
    json j;
    j["version"] = std::string(version());
#if defined(__clang__)
    j["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
    j["compiler"] = "gcc " __VERSION__;
#endif
    return j;
}

void write_json(const std::filesystem::path& file, const json& j) {
    auto out = open_output(file);
    out << j.dump(2) << '\n';
    close_output(out, file);
}

std::vector<std::size_t> snapshot_levels(const std::vector<double>& times, const TimeGrid& grid) {
    std::vector<std::size_t> levels;
    for (double t : times) levels.push_back(static_cast<std::size_t>(std::llround(t / grid.step())));
    return levels;
}

}  // namespace

// ---------------------------------------------------------------------------
// TauRule

TauRule TauRule::constant(double tau) {
    TauRule r;
    r.fixed = true;
    r.value = tau;
    return r;
}

TauRule TauRule::power(double exponent, double scale) {
    TauRule r;
    r.exponent = exponent;
    r.scale = scale;
    return r;
}

TauRule TauRule::optimal_l2() {
    TauRule r;
    r.exponent = 0.5;
    r.exponent_per_degree = 0.5;
    return r;
}

TauRule TauRule::optimal_h1() {
    TauRule r;
    r.exponent = 0.0;
    r.exponent_per_degree = 0.5;
    return r;
}

TauRule TauRule::superconvergent() {
    TauRule r;
    r.exponent = -1.0;
    r.exponent_per_degree = 1.0;
    return r;
}

TauRule TauRule::parse(std::string_view text) {
    const std::string s = strip_spaces(text);
    double number = 0.0;
    if (parse_double(s, number)) {
        if (!(number > 0.0) || !std::isfinite(number)) {
            throw Error(ErrorKind::Config, "time step must be positive, got '" + std::string(text) + "'");
        }
        return constant(number);
    }
    std::string_view rest = s;
    TauRule r;
    const auto star = rest.find('*');
    if (star != std::string_view::npos) {
        if (!parse_double(rest.substr(0, star), r.scale) || !(r.scale > 0.0)) {
            throw Error(ErrorKind::Config, "bad scale in time-step rule '" + std::string(text) + "'");
        }
        rest.remove_prefix(star + 1);
    }
    if (!rest.starts_with("h^")) {
        throw Error(ErrorKind::Config, "time-step rule must be a number or c*h^p, got '" + std::string(text) + "'");
    }
    rest.remove_prefix(2);
    if (rest == "((r+1)/2)") {
        r.exponent = 0.5;
        r.exponent_per_degree = 0.5;
    } else if (rest == "(r/2)") {
        r.exponent = 0.0;
        r.exponent_per_degree = 0.5;
    } else if (rest == "(r-1)") {
        r.exponent = -1.0;
        r.exponent_per_degree = 1.0;
    } else {
        if (rest.starts_with('(') && rest.ends_with(')')) rest = rest.substr(1, rest.size() - 2);
        if (!parse_double(rest, r.exponent) || !(r.exponent > 0.0)) {
            throw Error(ErrorKind::Config, "bad exponent in time-step rule '" + std::string(text) + "'");
        }
    }
    return r;
}

double TauRule::resolve(double h, int degree) const {
    if (fixed) return value;
    return scale * std::pow(h, exponent + exponent_per_degree * degree);
}

std::string TauRule::to_string() const {
    if (fixed) return format_number(value);
    std::string out = scale == 1.0 ? "" : format_number(scale) + "*";
    if (exponent_per_degree == 0.0) return out + "h^" + format_number(exponent);
    if (exponent_per_degree == 0.5 && exponent == 0.5) return out + "h^((r+1)/2)";
    if (exponent_per_degree == 0.5 && exponent == 0.0) return out + "h^(r/2)";
    if (exponent_per_degree == 1.0 && exponent == -1.0) return out + "h^(r-1)";
    throw Error(ErrorKind::Config, "time-step rule has no textual form");
}

// ---------------------------------------------------------------------------
// Configuration

RunConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Config, std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) config_error("config", "expected an object");

    static const std::set<std::string> known{"model",      "params",    "initial", "domain",  "N",       "degree",
                                             "tau",        "final_time", "snapshots", "output", "workers", "resolution"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) config_error("config." + key, "unknown key");
    }

    RunConfig c;
    if (!j.contains("model") || !j["model"].is_string()) config_error("config.model", "required string");
    c.model = j["model"].get<std::string>();
    const ModelEntry* entry = nullptr;
    try {
        entry = &find_model(c.model);
    } catch (const Error& e) {
        config_error("config.model", e.what());
    }

    c.params = entry->defaults;
    if (j.contains("params")) {
        if (!j["params"].is_object()) config_error("config.params", "expected an object");
        for (const auto& [key, value] : j["params"].items()) {
            if (!entry->defaults.contains(key)) {
                config_error("config.params." + key, "unknown parameter for model '" + c.model + "'");
            }
            if (!value.is_number()) config_error("config.params." + key, "expected a number");
            c.params[key] = value.get<double>();
        }
    }

    c.initial = entry->initial_variants.front();
    if (j.contains("initial")) {
        if (!j["initial"].is_string()) config_error("config.initial", "expected a string");
        c.initial = j["initial"].get<std::string>();
        const auto& v = entry->initial_variants;
        if (std::find(v.begin(), v.end(), c.initial) == v.end()) {
            std::string allowed;
            for (const auto& s : v) allowed += " " + s;
            config_error("config.initial", "unknown initial data '" + c.initial + "'; allowed:" + allowed);
        }
    }

    c.domain = entry->domain;
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        if (!d.is_array() || d.size() != 4 || !std::all_of(d.begin(), d.end(), [](const json& v) {
                return v.is_number();
            })) {
            config_error("config.domain", "expected [x0, x1, y0, y1]");
        }
        c.domain = {d[0].get<double>(), d[1].get<double>(), d[2].get<double>(), d[3].get<double>()};
        if (!(c.domain.x1 > c.domain.x0) || !(c.domain.y1 > c.domain.y0)) {
            config_error("config.domain", "need x0 < x1 and y0 < y1");
        }
    }

    if (j.contains("N")) {
        const auto& n = j["N"];
        std::vector<json> items;
        if (n.is_array()) {
            items.assign(n.begin(), n.end());
        } else {
            items.push_back(n);
        }
        if (items.empty()) config_error("config.N", "empty list");
        c.cells.clear();
        for (std::size_t i = 0; i < items.size(); ++i) {
            const std::string path = n.is_array() ? "config.N[" + std::to_string(i) + "]" : "config.N";
            if (!items[i].is_number_integer() || items[i].get<long long>() < 1) {
                config_error(path, "must be an integer >= 1");
            }
            c.cells.push_back(items[i].get<std::size_t>());
        }
    }

    if (j.contains("degree")) {
        if (!j["degree"].is_number_integer()) config_error("config.degree", "expected an integer");
        c.degree = j["degree"].get<int>();
    }
    if (c.degree < 3 || c.degree > 6) {
        config_error("config.degree", "must be in [3, 6], got " + std::to_string(c.degree));
    }

    if (j.contains("tau")) {
        const auto& t = j["tau"];
        try {
            if (t.is_number()) {
                c.tau = TauRule::parse(format_number(t.get<double>()));
            } else if (t.is_string()) {
                c.tau = TauRule::parse(t.get<std::string>());
            } else {
                config_error("config.tau", "expected a number or a rule string");
            }
        } catch (const Error& e) {
            if (std::string_view(e.what()).starts_with("config.")) throw;
            config_error("config.tau", e.what());
        }
    }

    c.final_time = entry->final_time;
    if (j.contains("final_time")) {
        if (!j["final_time"].is_number()) config_error("config.final_time", "expected a number");
        c.final_time = j["final_time"].get<double>();
    }
    if (!(c.final_time > 0.0) || !std::isfinite(c.final_time)) config_error("config.final_time", "must be > 0");

    if (j.contains("snapshots")) {
        const auto& s = j["snapshots"];
        if (!s.is_array()) config_error("config.snapshots", "expected a list of times");
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string path = "config.snapshots[" + std::to_string(i) + "]";
            if (!s[i].is_number()) config_error(path, "expected a number");
            const double t = s[i].get<double>();
            if (t < 0.0 || t > c.final_time) config_error(path, "outside [0, final_time]");
            c.snapshot_times.push_back(t);
        }
    }

    if (j.contains("output")) {
        if (!j["output"].is_string()) config_error("config.output", "expected a string");
        c.output = j["output"].get<std::string>();
    }
    if (j.contains("workers")) {
        if (!j["workers"].is_number_integer() || j["workers"].get<long long>() < 1) {
            config_error("config.workers", "must be an integer >= 1");
        }
        c.workers = j["workers"].get<std::size_t>();
    }
    if (j.contains("resolution")) {
        if (!j["resolution"].is_number_integer() || j["resolution"].get<long long>() < 2) {
            config_error("config.resolution", "must be an integer >= 2");
        }
        c.resolution = j["resolution"].get<std::size_t>();
    }

    for (std::size_t n : c.cells) {
        const double h = std::max((c.domain.x1 - c.domain.x0) / n, (c.domain.y1 - c.domain.y0) / n);
        const double tau = c.tau.resolve(h, c.degree);
        if (!(tau > 0.0) || !std::isfinite(tau)) config_error("config.tau", "does not resolve to a positive step");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const RunConfig& config) { return config_to_json(config).dump(2); }

ReactionModel build_model(const RunConfig& config) {
    return find_model(config.model).build(config.params, config.initial, config.domain);
}

Mesh2D build_mesh(const RunConfig& config, std::size_t cells) {
    return Mesh2D::uniform(config.domain, cells, cells, config.degree);
}

TimeGrid build_time_grid(const RunConfig& config, std::size_t cells) {
    const Mesh2D mesh = build_mesh(config, cells);
    return TimeGrid::from_step(config.final_time, config.tau.resolve(mesh.max_width(), config.degree));
}

// ---------------------------------------------------------------------------
// Scenarios

namespace {

std::vector<Scenario> build_scenarios() {
    std::vector<Scenario> s;
    const TauRule h2 = TauRule::power(2.0);
    const TauRule h3 = TauRule::power(3.0);
    const std::vector<Point2> quarter_points{{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}};

    s.push_back({"example1", "Brusselator with a known solution (A=1, B=0.5, D=1)", "brusselator_manufactured", {},
                 "exact", 10, 3, h2, 1.0, {0.0, 1.0}, {}, 0.0, false});
    s.push_back({"example2", "Brusselator converging to the fixed point (B, A/B) = (2, 0.5)", "brusselator",
                 {{"A", 1.0}, {"B", 2.0}, {"D1", 0.002}, {"D2", 0.002}}, "ramp", 10, 3, h2, 5.0, {0.0, 5.0}, {}, 0.0,
                 false});
    s.push_back({"example3", "Brusselator with 1 - A + B^2 < 0 (A=3.4, B=1): oscillating solution", "brusselator",
                 {{"A", 3.4}, {"B", 1.0}, {"D1", 0.002}, {"D2", 0.002}}, "ramp", 10, 3, h2, 40.0,
                 {0.0, 1.0, 20.0, 40.0}, quarter_points, 0.1, false});
    s.push_back({"example4", "Gray-Scott with a known solution (D=0.001, F=1, k=0) on (-1,1)^2",
                 "gray_scott_manufactured", {{"F", 1.0}, {"k", 0.0}, {"D1", 0.001}, {"D2", 0.001}}, "exact", 20, 4, h3,
                 1.0, {0.0, 1.0}, {}, 0.0, false});
    s.push_back({"example5", "Gierer-Meinhardt spike splitting, kappa = 0.0128", "gierer_meinhardt",
                 {{"eps", 0.04}, {"mu", 0.1}, {"kappa", 0.0128}}, "spike", 20, 3, h2, 900.0,
                 {0.0, 320.0, 340.0, 420.0, 900.0}, {}, 0.0, true});
    s.push_back({"example6", "Gierer-Meinhardt spike splitting, kappa = 0.0152", "gierer_meinhardt",
                 {{"eps", 0.04}, {"mu", 0.1}, {"kappa", 0.0152}}, "spike", 20, 3, h2, 990.0,
                 {0.0, 140.0, 290.0, 520.0, 570.0, 620.0, 990.0}, {}, 0.0, true});
    s.push_back({"example7", "Gierer-Meinhardt with eps^2 kinetics, kappa = 0.0128", "gierer_meinhardt_eps2",
                 {{"eps", 0.04}, {"mu", 0.1}, {"kappa", 0.0128}}, "spike", 20, 3, h2, 500.0,
                 {0.0, 10.0, 50.0, 100.0, 200.0, 500.0}, {}, 0.0, true});
    s.push_back({"example8", "Gierer-Meinhardt with eps^2 kinetics, kappa = 0.0152", "gierer_meinhardt_eps2",
                 {{"eps", 0.04}, {"mu", 0.1}, {"kappa", 0.0152}}, "spike", 20, 3, h2, 500.0,
                 {0.0, 10.0, 50.0, 100.0, 200.0, 500.0}, {}, 0.0, true});
    s.push_back({"example9", "Schnakenberg with a known solution (gamma=10, a=0.1, b=0.9)", "schnakenberg_manufactured",
                 {}, "exact", 10, 3, h2, 1.0, {0.0, 1.0}, {}, 0.0, false});
    s.push_back({"example10", "Schnakenberg stripes (gamma=1000)", "schnakenberg",
                 {{"gamma", 1000.0}, {"a", 0.126779}, {"b", 0.792366}, {"D1", 1.0}, {"D2", 10.0}}, "stripes", 20, 5, h3,
                 2.0, {0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0}, {}, 0.0, true});
    s.push_back({"example11", "Schnakenberg with gamma=10000 and 37 harmonics", "schnakenberg",
                 {{"gamma", 10000.0}, {"a", -0.887757}, {"b", 2.774242}, {"D1", 1.0}, {"D2", 10.0}}, "harmonics", 20, 6,
                 TauRule::power(3.0, 100.0), 5.0, {0.0, 0.5, 1.0, 2.5, 5.0}, {}, 0.0, true});
    return s;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
    static const std::vector<Scenario> reg = build_scenarios();
    return reg;
}

const Scenario& find_scenario(std::string_view name) {
    const auto& reg = scenario_registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const Scenario& s) { return s.name == name; });
    if (it == reg.end()) {
        std::string msg = "unknown scenario '" + std::string(name) + "'; available:";
        for (const auto& s : reg) msg += " " + s.name;
        throw Error(ErrorKind::Config, msg);
    }
    return *it;
}

std::vector<double> scenario_times(const Scenario& scenario, double final_time, bool smoke) {
    const double scale = smoke && scenario.long_running ? 0.1 : 1.0;
    std::vector<double> out;
    for (double t : scenario.snapshot_times) {
        const double ts = t * scale;
        if (ts <= final_time * (1.0 + 1e-12)) out.push_back(ts);
    }
    if (out.empty() || std::abs(out.back() - final_time) > 1e-12 * final_time) out.push_back(final_time);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RunConfig scenario_config(const Scenario& scenario, const ScenarioOptions& options) {
    const ModelEntry& entry = find_model(scenario.model);
    RunConfig c;
    c.model = scenario.model;
    c.params = entry.defaults;
    for (const auto& [k, v] : scenario.params) c.params[k] = v;
    c.initial = scenario.initial;
    c.domain = entry.domain;
    c.cells = {scenario.cells};
    c.degree = scenario.degree;
    c.tau = scenario.tau;
    const double scale = options.smoke && scenario.long_running ? 0.1 : 1.0;
    c.final_time = options.final_time ? *options.final_time : scenario.final_time * scale;
    c.snapshot_times = scenario_times(scenario, c.final_time, options.smoke);
    c.output = (options.output / scenario.name).string();
    c.workers = options.workers;
    c.resolution = options.resolution;
    return c;
}

ScenarioResult run_scenario(const Scenario& scenario, const ScenarioOptions& options) {
    const RunConfig config = scenario_config(scenario, options);
    const std::filesystem::path dir = config.output;
    ensure_directory(dir);

    const ReactionModel model = build_model(config);
    Mesh2D mesh = build_mesh(config, scenario.cells);
    const TimeGrid time = build_time_grid(config, scenario.cells);
    if (time.adjustment() > 0.01 && options.warn) {
        options.warn("time step adjusted from " + format_number(time.requested_step) + " to " +
                     format_number(time.step()));
    }

    // Trace levels: every trace_interval, rounded to time levels.
    std::set<std::size_t> trace_levels;
    std::vector<double> trace_times;
    if (!scenario.trace_points.empty()) {
        const double interval = std::max(scenario.trace_interval, time.step());
        const auto count = static_cast<std::size_t>(std::floor(config.final_time / interval + 1e-9));
        for (std::size_t k = 0; k <= count; ++k) {
            const double t = std::min(config.final_time, k * interval);
            trace_times.push_back(t);
            trace_levels.insert(static_cast<std::size_t>(std::llround(t / time.step())));
        }
    }
    const auto snap_levels = snapshot_levels(config.snapshot_times, time);
    const std::set<std::size_t> snap_set(snap_levels.begin(), snap_levels.end());

    RunHooks hooks;
    hooks.snapshot_times = config.snapshot_times;
    hooks.snapshot_times.insert(hooks.snapshot_times.end(), trace_times.begin(), trace_times.end());
    hooks.keep_snapshots = false;

    ScenarioResult result{config, {}, {}, Spline2D(mesh), 0.0};
    std::set<std::size_t> seen;
    hooks.on_snapshot = [&](const Snapshot& snap) {
        if (!seen.insert(snap.level).second) return;
        if (trace_levels.contains(snap.level)) {
            std::vector<State> values;
            for (const auto& p : scenario.trace_points) values.push_back(snap.spline.value(p.x, p.y));
            result.traces.emplace_back(snap.time, std::move(values));
        }
        if (snap_set.contains(snap.level)) {
            const auto file = dir / snapshot_name(snap.time);
            auto out = open_output(file);
            emit_solution_grid(snap.spline, config.resolution, out);
            close_output(out, file);
            result.snapshots.push_back({snap.time, lattice_stats(snap.spline, config.resolution), file});
        }
    };

    const AdiSolver solver(model, std::move(mesh), time, config.workers);
    RunResult run = solver.run(hooks);
    result.solution = std::move(run.solution);
    result.seconds = run.seconds;
    if (!result.solution.all_finite() && options.warn) options.warn(kNotFinite);

    write_summary(dir / "summary.csv", result.snapshots);
    if (!result.traces.empty()) {
        const auto file = dir / "traces.csv";
        auto out = open_output(file);
        out << 't';
        for (std::size_t k = 0; k < scenario.trace_points.size(); ++k) {
            const auto& p = scenario.trace_points[k];
            const std::string tag = "(" + format_number(p.x) + " " + format_number(p.y) + ")";
            out << ",u1" << tag << ",u2" << tag;
        }
        out << '\n';
        for (const auto& [t, values] : result.traces) {
            out << format_number(t);
            for (const auto& v : values) out << ',' << format_number(v[0]) << ',' << format_number(v[1]);
            out << '\n';
        }
        close_output(out, file);
    }

    json meta;
    meta["scenario"] = scenario.name;
    meta["description"] = scenario.description;
    meta["config"] = config_to_json(config);
    meta["smoke"] = options.smoke && scenario.long_running;
    meta["steps"] = time.steps;
    meta["tau"] = time.step();
    meta["seconds"] = result.seconds;
    meta["environment"] = environment_json();
    meta["finite"] = result.solution.all_finite();
    if (model.exact) {
        const auto rep = norms(result.solution, ReferenceField::at_time(*model.exact, config.final_time), time.step());
        write_errors(dir / "errors.csv", rep);
        meta["errors"] = report_to_json(rep);
    }
    write_json(dir / "metadata.json", meta);
    return result;
}

// ---------------------------------------------------------------------------
// Plain runs

RunOutcome run_config(const RunConfig& config, std::function<void(std::string_view)> warn) {
    const std::size_t cells = config.cells.front();
    const std::filesystem::path dir = config.output;
    ensure_directory(dir);
    const ReactionModel model = build_model(config);
    Mesh2D mesh = build_mesh(config, cells);
    const TimeGrid time = build_time_grid(config, cells);
    if (time.adjustment() > 0.01 && warn) {
        warn("time step adjusted from " + format_number(time.requested_step) + " to " + format_number(time.step()));
    }

    std::vector<SnapshotSummary> summaries;
    RunHooks hooks;
    hooks.snapshot_times = config.snapshot_times;
    hooks.keep_snapshots = false;
    std::set<std::size_t> seen;
    hooks.on_snapshot = [&](const Snapshot& snap) {
        if (!seen.insert(snap.level).second) return;
        const auto file = dir / snapshot_name(snap.time);
        auto out = open_output(file);
        emit_solution_grid(snap.spline, config.resolution, out);
        close_output(out, file);
        summaries.push_back({snap.time, lattice_stats(snap.spline, config.resolution), file});
    };

    const AdiSolver solver(model, std::move(mesh), time, config.workers);
    RunOutcome outcome{cells, time, solver.run(hooks), std::nullopt};
    if (!outcome.result.solution.all_finite() && warn) warn(kNotFinite);

    const auto file = dir / "solution.csv";
    auto out = open_output(file);
    emit_solution_grid(outcome.result.solution, config.resolution, out);
    close_output(out, file);
    if (!seen.contains(time.steps)) {
        summaries.push_back(
            {time.final_time, lattice_stats(outcome.result.solution, config.resolution), file});
    }
    write_summary(dir / "summary.csv", summaries);

    json meta;
    meta["config"] = config_to_json(config);
    meta["steps"] = time.steps;
    meta["tau"] = time.step();
    meta["seconds"] = outcome.result.seconds;
    meta["environment"] = environment_json();
    meta["finite"] = outcome.result.solution.all_finite();
    if (model.exact) {
        outcome.errors = norms(outcome.result.solution, ReferenceField::at_time(*model.exact, config.final_time),
                               time.step());
        write_errors(dir / "errors.csv", *outcome.errors);
        meta["errors"] = report_to_json(*outcome.errors);
    }
    write_json(dir / "metadata.json", meta);
    return outcome;
}

std::vector<RunOutcome> run_sweep(const RunConfig& config, std::function<void(std::string_view)> warn) {
    std::vector<RunOutcome> outcomes;
    for (std::size_t n : config.cells) {
        RunConfig one = config;
        one.cells = {n};
        one.output = (std::filesystem::path(config.output) / ("N" + std::to_string(n))).string();
        outcomes.push_back(run_config(one, warn));
    }
    if (outcomes.empty() || !outcomes.front().errors) return outcomes;

    const std::vector<NormKind> kinds{NormKind::L2,         NormKind::H1,      NormKind::Linf,
                                      NormKind::NodalValue, NormKind::NodalDx, NormKind::NodalDy};
    std::vector<RateTable> tables(kinds.size());
    const auto file = std::filesystem::path(config.output) / "sweep.csv";
    auto out = open_output(file);
    out << "N,h,tau,steps";
    for (NormKind k : kinds) {
        const std::string n(to_string(k));
        out << ',' << n << "_1," << n << "_2," << n << "_combined," << n << "_rate";
    }
    out << '\n';
    for (const auto& o : outcomes) {
        const double h = std::max((config.domain.x1 - config.domain.x0) / o.cells,
                                  (config.domain.y1 - config.domain.y0) / o.cells);
        out << o.cells << ',' << format_number(h) << ',' << format_number(o.time.step()) << ',' << o.time.steps;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            const double e = combined_error(*o.errors, kinds[k]);
            tables[k].add(h, e);
            const double r = tables[k].rows().back().rate;
            out << ',' << format_number(o.errors->component(0, kinds[k])) << ','
                << format_number(o.errors->component(1, kinds[k])) << ',' << format_number(e) << ','
                << (std::isnan(r) ? std::string() : format_number(r));
        }
        out << '\n';
    }
    close_output(out, file);
    return outcomes;
}

// ---------------------------------------------------------------------------
// Output helpers

void emit_solution_grid(const Spline2D& spline, std::size_t resolution, std::ostream& out) {
    if (resolution < 2) throw Error(ErrorKind::Config, "plot resolution must be at least 2");
    const Rectangle& d = spline.mesh().domain;
    out << "x,y,u1,u2\n";
    for (std::size_t j = 0; j < resolution; ++j) {
        const double y = j + 1 == resolution ? d.y1 : d.y0 + (d.y1 - d.y0) * j / (resolution - 1);
        for (std::size_t i = 0; i < resolution; ++i) {
            const double x = i + 1 == resolution ? d.x1 : d.x0 + (d.x1 - d.x0) * i / (resolution - 1);
            const State u = spline.value(x, y);
            out << format_number(x) << ',' << format_number(y) << ',' << format_number(u[0]) << ','
                << format_number(u[1]) << '\n';
        }
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing solution grid");
}

std::array<ComponentStats, 2> lattice_stats(const Spline2D& spline, std::size_t resolution) {
    if (resolution < 2) throw Error(ErrorKind::Config, "plot resolution must be at least 2");
    const Rectangle& d = spline.mesh().domain;
    std::array<ComponentStats, 2> st;
    for (auto& s : st) {
        s.min = std::numeric_limits<double>::infinity();
        s.max = -std::numeric_limits<double>::infinity();
    }
    std::array<double, 2> sum{};
    for (std::size_t j = 0; j < resolution; ++j) {
        const double y = j + 1 == resolution ? d.y1 : d.y0 + (d.y1 - d.y0) * j / (resolution - 1);
        for (std::size_t i = 0; i < resolution; ++i) {
            const double x = i + 1 == resolution ? d.x1 : d.x0 + (d.x1 - d.x0) * i / (resolution - 1);
            const State u = spline.value(x, y);
            for (int c = 0; c < 2; ++c) {
                st[c].min = std::min(st[c].min, u[c]);
                st[c].max = std::max(st[c].max, u[c]);
                sum[c] += u[c];
                if (std::isnan(u[c])) st[c].min = st[c].max = u[c];
            }
        }
    }
    for (int c = 0; c < 2; ++c) st[c].mean = sum[c] / static_cast<double>(resolution * resolution);
    return st;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string_view version() noexcept { return OSC_VERSION; }

}  // namespace osc
