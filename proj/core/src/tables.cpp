// Convergence tables: published reference values and the runner.

#include "osc/error.hpp"
#include "osc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

namespace osc {

namespace {

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

PublishedRow row(int r, std::size_t n, double e1, double e2, double rate) {
    PublishedRow p;
    p.degree = r;
    p.cells = n;
    p.errors[0] = {e1, e2};
    p.rates = {rate, kNone, kNone};
    return p;
}

PublishedRow nodal_row(int r, std::size_t n, std::array<double, 3> v, std::array<double, 3> dx,
                       std::array<double, 3> dy) {
    PublishedRow p;
    p.degree = r;
    p.cells = n;
    p.errors = {{{v[0], v[1]}, {dx[0], dx[1]}, {dy[0], dy[1]}}};
    p.rates = {v[2], dx[2], dy[2]};
    return p;
}

std::vector<TableDefinition> build_tables() {
    std::vector<TableDefinition> t;
    const std::map<std::string, double> case2{{"F", 1.0}, {"k", 0.0}, {"D1", 0.001}, {"D2", 0.001}};
    const std::map<std::string, double> case1{{"F", 1.0}, {"k", 0.0}, {"D1", 1.0}, {"D2", 1.0}};

    t.push_back({"T1",
                 "Brusselator manufactured, L2 errors at T=1",
                 "brusselator_manufactured",
                 {},
                 NormKind::L2,
                 TauRule::optimal_l2(),
                 1.0,
                 {row(3, 10, 0.683e-4, 0.706e-4, kNone), row(3, 15, 0.134e-4, 0.139e-4, 4.014),
                  row(3, 20, 0.424e-5, 0.438e-5, 4.007), row(4, 9, 0.139e-4, 0.144e-4, kNone),
                  row(4, 16, 0.785e-6, 0.816e-6, 4.993), row(4, 25, 0.845e-7, 0.878e-7, 4.996),
                  row(5, 10, 0.818e-6, 0.850e-6, kNone), row(5, 15, 0.718e-7, 0.747e-7, 6.000),
                  row(5, 20, 0.128e-7, 0.133e-7, 6.000)}});
    t.push_back({"T2",
                 "Brusselator manufactured, H1 errors at T=1",
                 "brusselator_manufactured",
                 {},
                 NormKind::H1,
                 TauRule::optimal_h1(),
                 1.0,
                 {row(3, 9, 0.835e-2, 0.864e-2, kNone), row(3, 16, 0.151e-2, 0.156e-2, 2.975),
                  row(3, 25, 0.399e-3, 0.411e-3, 2.986), row(4, 10, 0.586e-3, 0.609e-3, kNone),
                  row(4, 15, 0.116e-3, 0.120e-3, 3.999), row(4, 20, 0.366e-4, 0.381e-4, 3.999),
                  row(5, 9, 0.983e-4, 0.102e-3, kNone), row(5, 16, 0.553e-5, 0.576e-5, 5.000),
                  row(5, 25, 0.594e-6, 0.618e-6, 5.000)}});
    t.push_back({"T3",
                 "Brusselator manufactured, maximum-norm errors at T=1",
                 "brusselator_manufactured",
                 {},
                 NormKind::Linf,
                 TauRule::optimal_l2(),
                 1.0,
                 {row(3, 10, 0.239e-3, 0.244e-3, kNone), row(3, 15, 0.472e-4, 0.478e-4, 4.019),
                  row(3, 20, 0.149e-4, 0.152e-4, 3.985), row(4, 9, 0.282e-4, 0.297e-4, kNone),
                  row(4, 16, 0.162e-5, 0.168e-5, 4.999), row(4, 25, 0.174e-6, 0.180e-6, 4.997),
                  row(5, 10, 0.172e-5, 0.177e-5, kNone), row(5, 15, 0.152e-6, 0.156e-6, 5.997),
                  row(5, 20, 0.270e-7, 0.279e-7, 5.983)}});
    t.push_back({"T4",
                 "Brusselator manufactured, maximum nodal errors at T=1",
                 "brusselator_manufactured",
                 {},
                 NormKind::NodalValue,
                 TauRule::superconvergent(),
                 1.0,
                 {nodal_row(3, 10, {0.239e-3, 0.244e-3, kNone}, {0.951e-3, 0.752e-3, kNone},
                            {0.729e-3, 0.983e-3, kNone}),
                  nodal_row(3, 15, {0.472e-4, 0.478e-4, 4.019}, {0.196e-3, 0.146e-3, 3.897},
                            {0.143e-3, 0.203e-3, 3.896}),
                  nodal_row(3, 20, {0.149e-4, 0.152e-4, 3.985}, {0.623e-4, 0.468e-4, 3.982},
                            {0.454e-4, 0.644e-4, 3.985}),
                  nodal_row(4, 10, {0.160e-5, 0.165e-5, kNone}, {0.969e-5, 0.516e-5, kNone},
                            {0.489e-5, 0.101e-4, kNone}),
                  nodal_row(4, 15, {0.141e-6, 0.144e-6, 6.024}, {0.887e-6, 0.443e-6, 5.895},
                            {0.427e-6, 0.928e-6, 5.894}),
                  nodal_row(4, 20, {0.250e-7, 0.258e-7, 5.966}, {0.159e-6, 0.806e-7, 5.979},
                            {0.764e-7, 0.166e-6, 5.984}),
                  nodal_row(5, 10, {0.167e-7, 0.172e-7, kNone}, {0.986e-7, 0.542e-7, kNone},
                            {0.513e-7, 0.103e-6, kNone}),
                  nodal_row(5, 15, {0.650e-9, 0.665e-9, 8.026}, {0.401e-8, 0.206e-8, 7.896},
                            {0.199e-8, 0.417e-8, 7.897}),
                  nodal_row(5, 20, {0.666e-10, 0.685e-10, 7.901}, {0.413e-9, 0.215e-9, 7.906},
                            {0.205e-9, 0.428e-9, 7.913})}});
    t.push_back({"T5",
                 "Gray-Scott manufactured (D=0.001, F=1, k=0), L2 errors at T=1",
                 "gray_scott_manufactured",
                 case2,
                 NormKind::L2,
                 TauRule::optimal_l2(),
                 1.0,
                 {row(3, 20, 0.708e-4, 0.647e-4, kNone), row(3, 26, 0.252e-4, 0.231e-4, 3.928),
                  row(3, 32, 0.111e-4, 0.102e-4, 3.963), row(4, 8, 0.569e-3, 0.458e-3, kNone),
                  row(4, 18, 0.984e-5, 0.788e-5, 5.005), row(4, 32, 0.567e-6, 0.459e-6, 4.953),
                  row(5, 20, 0.575e-6, 0.456e-6, kNone), row(5, 26, 0.119e-6, 0.945e-7, 6.000),
                  row(5, 32, 0.343e-7, 0.272e-7, 6.000)}});
    t.push_back({"T6",
                 "Gray-Scott manufactured (D=0.001, F=1, k=0), H1 errors at T=1",
                 "gray_scott_manufactured",
                 case2,
                 NormKind::H1,
                 TauRule::optimal_h1(),
                 1.0,
                 {row(3, 8, 0.820e-1, 0.722e-1, kNone), row(3, 18, 0.756e-2, 0.676e-2, 2.932),
                  row(3, 32, 0.137e-2, 0.123e-2, 2.968), row(4, 20, 0.437e-3, 0.358e-3, kNone),
                  row(4, 26, 0.153e-3, 0.126e-3, 3.989), row(4, 32, 0.669e-4, 0.551e-4, 3.984),
                  row(5, 8, 0.424e-2, 0.346e-2, kNone), row(5, 18, 0.719e-4, 0.583e-4, 5.029),
                  row(5, 32, 0.404e-5, 0.327e-5, 5.005)}});
    t.push_back({"T7",
                 "Gray-Scott manufactured (D=0.001, F=1, k=0), maximum-norm errors at T=1",
                 "gray_scott_manufactured",
                 case2,
                 NormKind::Linf,
                 TauRule::optimal_l2(),
                 1.0,
                 {row(3, 20, 0.175e-3, 0.142e-3, kNone), row(3, 26, 0.621e-4, 0.506e-4, 3.951),
                  row(3, 32, 0.272e-4, 0.222e-4, 3.973), row(4, 8, 0.106e-2, 0.751e-3, kNone),
                  row(4, 18, 0.176e-4, 0.120e-4, 5.055), row(4, 32, 0.963e-6, 0.659e-6, 5.048),
                  row(5, 20, 0.102e-5, 0.698e-6, kNone), row(5, 26, 0.214e-6, 0.145e-6, 5.977),
                  row(5, 32, 0.616e-7, 0.420e-7, 5.984)}});
    t.push_back({"T8",
                 "Gray-Scott manufactured (D=1, F=1, k=0), maximum nodal errors at T=1",
                 "gray_scott_manufactured",
                 case1,
                 NormKind::NodalValue,
                 TauRule::superconvergent(),
                 1.0,
                 {nodal_row(3, 20, {0.282e-3, 0.284e-3, kNone}, {0.203e-2, 0.894e-3, kNone},
                            {0.896e-3, 0.204e-2, kNone}),
                  nodal_row(3, 24, {0.136e-3, 0.137e-3, 3.998}, {0.103e-2, 0.432e-3, 3.726},
                            {0.432e-3, 0.104e-2, 3.727}),
                  nodal_row(3, 28, {0.734e-4, 0.739e-4, 3.999}, {0.543e-3, 0.233e-3, 4.160},
                            {0.233e-3, 0.546e-3, 4.159}),
                  nodal_row(3, 32, {0.430e-4, 0.433e-4, 3.999}, {0.327e-3, 0.137e-3, 3.812},
                            {0.137e-3, 0.328e-3, 3.816}),
                  nodal_row(3, 36, {0.269e-4, 0.270e-4, 3.999}, {0.201e-3, 0.853e-4, 4.126},
                            {0.855e-4, 0.202e-3, 4.125}),
                  nodal_row(4, 20, {0.345e-5, 0.346e-5, kNone}, {0.205e-4, 0.108e-4, kNone},
                            {0.109e-4, 0.206e-4, kNone}),
                  nodal_row(4, 24, {0.115e-5, 0.116e-5, 6.000}, {0.721e-5, 0.363e-5, 5.728},
                            {0.364e-5, 0.724e-5, 5.729}),
                  nodal_row(4, 28, {0.458e-6, 0.460e-6, 6.000}, {0.279e-5, 0.144e-5, 6.162},
                            {0.144e-5, 0.280e-5, 6.162}),
                  nodal_row(4, 32, {0.205e-6, 0.206e-6, 6.000}, {0.128e-5, 0.647e-6, 5.813},
                            {0.647e-6, 0.129e-5, 5.813}),
                  nodal_row(4, 36, {0.101e-6, 0.102e-6, 6.000}, {0.624e-6, 0.319e-6, 6.128},
                            {0.319e-6, 0.626e-6, 6.127}),
                  nodal_row(5, 20, {0.340e-7, 0.342e-7, kNone}, {0.202e-6, 0.107e-6, kNone},
                            {0.107e-6, 0.203e-6, kNone}),
                  nodal_row(5, 24, {0.792e-8, 0.795e-8, 8.000}, {0.495e-7, 0.248e-7, 7.728},
                            {0.249e-7, 0.497e-7, 7.729}),
                  nodal_row(5, 28, {0.231e-8, 0.232e-8, 8.000}, {0.141e-7, 0.724e-8, 8.162},
                            {0.724e-8, 0.141e-7, 8.161}),
                  nodal_row(5, 32, {0.792e-9, 0.796e-9, 8.000}, {0.495e-8, 0.247e-8, 7.813},
                            {0.249e-8, 0.497e-8, 7.813}),
                  nodal_row(5, 36, {0.313e-9, 0.315e-9, 7.873}, {0.193e-8, 0.984e-9, 8.000},
                            {0.985e-9, 0.194e-8, 8.000})}});
    t.push_back({"T10",
                 "Schnakenberg manufactured, L2 errors at T=1",
                 "schnakenberg_manufactured",
                 {},
                 NormKind::L2,
                 TauRule::optimal_l2(),
                 1.0,
                 {row(3, 10, 0.683e-4, 0.805e-3, kNone), row(3, 15, 0.134e-4, 0.159e-3, 3.998),
                  row(3, 20, 0.424e-5, 0.504e-4, 4.000), row(4, 9, 0.132e-4, 0.141e-3, kNone),
                  row(4, 16, 0.746e-6, 0.792e-5, 4.999), row(4, 25, 0.802e-7, 0.851e-6, 4.999),
                  row(5, 10, 0.775e-6, 0.831e-5, kNone), row(5, 15, 0.680e-7, 0.730e-6, 6.000),
                  row(5, 20, 0.121e-7, 0.130e-6, 6.000)}});
    t.push_back({"T11",
                 "Schnakenberg manufactured, H1 errors at T=1",
                 "schnakenberg_manufactured",
                 {},
                 NormKind::H1,
                 TauRule::optimal_h1(),
                 1.0,
                 {row(3, 9, 0.764e-2, 0.792e-1, kNone), row(3, 16, 0.138e-2, 0.143e-1, 2.971),
                  row(3, 25, 0.363e-3, 0.377e-2, 2.993), row(4, 10, 0.527e-3, 0.589e-2, kNone),
                  row(4, 15, 0.104e-3, 0.116e-2, 3.997), row(4, 20, 0.330e-4, 0.369e-3, 3.999),
                  row(5, 9, 0.882e-4, 0.999e-3, kNone), row(5, 16, 0.497e-5, 0.563e-4, 5.000),
                  row(5, 25, 0.533e-6, 0.604e-5, 5.000)}});
    t.push_back({"T12",
                 "Schnakenberg manufactured, maximum-norm errors at T=1",
                 "schnakenberg_manufactured",
                 {},
                 NormKind::Linf,
                 TauRule::optimal_l2(),
                 1.0,
                 {row(3, 10, 0.306e-3, 0.174e-2, kNone), row(3, 15, 0.604e-4, 0.341e-3, 4.021),
                  row(3, 20, 0.191e-4, 0.109e-3, 3.968), row(4, 9, 0.393e-4, 0.283e-4, kNone),
                  row(4, 16, 0.223e-5, 0.159e-4, 5.003), row(4, 25, 0.241e-6, 0.171e-5, 4.998),
                  row(5, 10, 0.238e-5, 0.167e-4, kNone), row(5, 15, 0.209e-6, 0.146e-5, 6.009),
                  row(5, 20, 0.373e-7, 0.262e-6, 5.982)}});
    t.push_back({"T13",
                 "Schnakenberg manufactured, maximum nodal errors at T=1",
                 "schnakenberg_manufactured",
                 {},
                 NormKind::NodalValue,
                 TauRule::superconvergent(),
                 1.0,
                 {nodal_row(3, 10, {0.306e-3, 0.174e-2, kNone}, {0.106e-2, 0.546e-2, kNone},
                            {0.699e-3, 0.989e-2, kNone}),
                  nodal_row(3, 15, {0.604e-4, 0.341e-3, 4.021}, {0.209e-3, 0.106e-2, 4.033},
                            {0.137e-3, 0.204e-2, 3.888}),
                  nodal_row(3, 20, {0.191e-4, 0.109e-3, 3.968}, {0.661e-4, 0.341e-3, 3.952},
                            {0.438e-4, 0.650e-3, 3.981}),
                  nodal_row(4, 10, {0.227e-5, 0.166e-4, kNone}, {0.104e-4, 0.522e-4, kNone},
                            {0.519e-5, 0.992e-4, kNone}),
                  nodal_row(4, 15, {0.199e-6, 0.145e-5, 6.024}, {0.913e-6, 0.452e-5, 6.035},
                            {0.458e-6, 0.911e-5, 5.890}),
                  nodal_row(4, 20, {0.354e-7, 0.260e-6, 5.965}, {0.163e-6, 0.816e-6, 5.950},
                            {0.823e-7, 0.163e-5, 5.981}),
                  nodal_row(5, 10, {0.233e-7, 0.167e-6, kNone}, {0.108e-6, 0.525e-6, kNone},
                            {0.529e-7, 0.994e-6, kNone}),
                  nodal_row(5, 15, {0.909e-9, 0.645e-8, 8.025}, {0.420e-8, 0.202e-7, 8.036},
                            {0.209e-8, 0.405e-7, 7.891}),
                  nodal_row(5, 20, {0.924e-10, 0.654e-9, 7.958}, {0.429e-9, 0.205e-8, 7.943},
                            {0.213e-9, 0.409e-8, 7.974})}});
    return t;
}

}  // namespace

std::vector<NormKind> TableDefinition::columns() const {
    if (nodal()) return {NormKind::NodalValue, NormKind::NodalDx, NormKind::NodalDy};
    return {norm};
}

std::vector<int> TableDefinition::degrees() const {
    std::vector<int> out;
    for (const auto& p : published) {
        if (std::find(out.begin(), out.end(), p.degree) == out.end()) out.push_back(p.degree);
    }
    return out;
}

const std::vector<TableDefinition>& table_registry() {
    static const std::vector<TableDefinition> tables = build_tables();
    return tables;
}

const TableDefinition& find_table(std::string_view id) {
    const auto& reg = table_registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const TableDefinition& t) { return t.id == id; });
    if (it == reg.end()) {
        std::string msg = "unknown table '" + std::string(id) + "'; available:";
        for (const auto& t : reg) msg += " " + t.id;
        throw Error(ErrorKind::Config, msg);
    }
    return *it;
}

TableRowResult run_table_row(const TableDefinition& table, int degree, std::size_t cells, std::size_t workers) {
    const ModelEntry& entry = find_model(table.model);
    auto params = entry.defaults;
    for (const auto& [k, v] : table.params) params[k] = v;
    const ReactionModel model = entry.build(params, entry.initial_variants.front(), entry.domain);

    TableRowResult out;
    out.degree = degree;
    out.cells = cells;
    Mesh2D mesh = Mesh2D::uniform(entry.domain, cells, cells, degree);
    out.h = mesh.max_width();
    const TimeGrid time = TimeGrid::from_step(table.final_time, table.coupling.resolve(out.h, degree));
    out.tau = time.step();
    out.steps = time.steps;

    const AdiSolver solver(model, std::move(mesh), time, workers);
    const RunResult run = solver.run();
    out.seconds = run.seconds;
    out.report = norms(run.solution, ReferenceField::at_time(*model.exact, table.final_time), out.tau);
    for (NormKind k : table.columns()) out.combined.push_back(combined_error(out.report, k));
    out.rates.assign(out.combined.size(), kNone);
    return out;
}

TableResult reproduce_table(const TableDefinition& table, const TableOptions& options) {
    TableResult result;
    result.table = &table;
    const std::set<int> only(options.degrees.begin(), options.degrees.end());
    const TableRowResult* previous = nullptr;
    for (const auto& p : table.published) {
        if (!only.empty() && !only.contains(p.degree)) continue;
        TableRowResult r;
        try {
            r = run_table_row(table, p.degree, p.cells, options.workers);
            if (r.tau > 0.0 && std::abs(r.tau - table.coupling.resolve(r.h, p.degree)) >
                                   0.01 * table.coupling.resolve(r.h, p.degree)) {
                if (options.warn) options.warn("time step adjusted by more than 1% for N=" + std::to_string(p.cells));
            }
        } catch (const Error& e) {
            r.degree = p.degree;
            r.cells = p.cells;
            r.combined.assign(table.columns().size(), kNone);
            r.rates.assign(table.columns().size(), kNone);
            r.failure = e.what();
        }
        if (previous && previous->degree == r.degree && !previous->failure && !r.failure) {
            for (std::size_t k = 0; k < r.combined.size(); ++k) {
                r.rates[k] = rate(previous->combined[k], previous->h, r.combined[k], r.h);
            }
        }
        result.rows.push_back(std::move(r));
        previous = &result.rows.back();
        if (options.on_row) options.on_row(result.rows.back());
    }
    return result;
}

void write_table_csv(const TableResult& result, std::ostream& out) {
    const TableDefinition& table = *result.table;
    const auto cols = table.columns();
    out << "r,N,e1,e2,rate";
    for (std::size_t k = 1; k < cols.size(); ++k) {
        const std::string n(to_string(cols[k]));
        out << ',' << n << "_1," << n << "_2,rate_" << n;
    }
    out << ",h,tau,steps";
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const std::string n = k == 0 ? "" : std::string(to_string(cols[k])) + "_";
        out << ",published_" << n << "e1,published_" << n << "e2,published_" << n << "rate";
    }
    out << ",status\n";
    for (const auto& r : result.rows) {
        const auto published = std::find_if(table.published.begin(), table.published.end(), [&](const PublishedRow& p) {
            return p.degree == r.degree && p.cells == r.cells;
        });
        out << r.degree << ',' << r.cells;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (r.failure) {
                out << ",,,";
                continue;
            }
            out << ',' << format_number(r.report.component(0, cols[k])) << ','
                << format_number(r.report.component(1, cols[k])) << ','
                << (std::isnan(r.rates[k]) ? std::string() : format_number(r.rates[k]));
        }
        out << ',' << format_number(r.h) << ',' << format_number(r.tau) << ',' << r.steps;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const auto& e = published->errors[k];
            const double pr = published->rates[k];
            out << ',' << format_number(e[0]) << ',' << format_number(e[1]) << ','
                << (std::isnan(pr) ? std::string() : format_number(pr));
        }
        std::string status = r.failure ? *r.failure : "ok";
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        out << ',' << status << '\n';
    }
}

}  // namespace osc
