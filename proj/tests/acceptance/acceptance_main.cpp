// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "dense_lu.hpp"
#include "random_abd.hpp"

#include "osc/abd.hpp"
#include "osc/adi.hpp"
#include "osc/collocation.hpp"
#include "osc/error.hpp"
#include "osc/error_analysis.hpp"
#include "osc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numeric>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) ok = false;
        detail << (cond ? "" : "[x] ") << what << "; ";
    }
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

// Runs rows of one degree and returns per-row results.
std::vector<osc::TableRowResult> rows_for(const std::string& id, int degree) {
    osc::TableOptions opts;
    opts.degrees = {degree};
    auto result = osc::reproduce_table(osc::find_table(id), opts);
    return result.rows;
}

void rate_checks(Check& c, const std::string& label, const std::vector<osc::TableRowResult>& rows,
                 std::size_t column, const std::vector<double>& targets, double tol) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto& row = rows.at(k + 1);
        if (row.failure) {
            c.expect(false, label + " N=" + std::to_string(row.cells) + " failed: " + *row.failure);
            continue;
        }
        const double r = row.rates.at(column);
        c.expect(within(r, targets[k], tol), label + " rate " + fmt(r) + " vs " + fmt(targets[k]) + "±" + fmt(tol, 2));
    }
}

Check criterion_table1() {
    Check c;
    const auto start = Clock::now();
    const auto rows = rows_for("T1", 3);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const double published[3][2] = {{0.683e-4, 0.706e-4}, {0.134e-4, 0.139e-4}, {0.424e-5, 0.438e-5}};
    for (std::size_t k = 0; k < 3; ++k) {
        for (int comp = 0; comp < 2; ++comp) {
            const double e = rows[k].report.components[comp].l2;
            const double p = published[k][comp];
            c.expect(std::abs(e - p) <= 0.1 * p,
                     "N=" + std::to_string(rows[k].cells) + " e" + std::to_string(comp + 1) + " " + fmt(e) + " vs " + fmt(p));
        }
    }
    rate_checks(c, "L2", rows, 0, {4.014, 4.007}, 0.10);
    c.expect(seconds <= 60.0, "runtime " + fmt(seconds, 3) + " s <= 60 s");
    return c;
}

Check criterion_table2() {
    Check c;
    rate_checks(c, "H1 r=4", rows_for("T2", 4), 0, {3.999, 3.999}, 0.10);
    return c;
}

Check criterion_table3() {
    Check c;
    rate_checks(c, "Linf r=5", rows_for("T3", 5), 0, {5.997, 5.983}, 0.15);
    return c;
}

Check criterion_table4() {
    Check c;
    const auto r3 = rows_for("T4", 3);
    const auto r5 = rows_for("T4", 5);
    rate_checks(c, "nodal r=3", r3, 0, {4.019, 3.985}, 0.15);
    rate_checks(c, "nodal r=5", r5, 0, {8.026, 7.901}, 0.25);
    const auto& published = osc::find_table("T4").published;
    for (const auto* rows : {&r3, &r5}) {
        for (std::size_t k = 1; k < rows->size(); ++k) {
            const auto& row = (*rows)[k];
            const auto it = std::find_if(published.begin(), published.end(), [&](const osc::PublishedRow& p) {
                return p.degree == row.degree && p.cells == row.cells;
            });
            for (std::size_t col : {1u, 2u}) {
                const std::string label = std::string(col == 1 ? "d/dx" : "d/dy") + " r=" + std::to_string(row.degree);
                c.expect(within(row.rates[col], it->rates[col], 0.25),
                         label + " rate " + fmt(row.rates[col]) + " vs " + fmt(it->rates[col]) + "±0.25");
            }
        }
    }
    return c;
}

Check criterion_gray_scott() {
    Check c;
    rate_checks(c, "T5 L2 r=5", rows_for("T5", 5), 0, {6.000, 6.000}, 0.10);
    rate_checks(c, "T8 nodal r=4", rows_for("T8", 4), 0, {6.0, 6.0, 6.0, 6.0}, 0.15);
    return c;
}

Check criterion_schnakenberg() {
    Check c;
    rate_checks(c, "T10 L2 r=3", rows_for("T10", 3), 0, {3.998, 4.000}, 0.10);
    rate_checks(c, "T12 Linf r=5", rows_for("T12", 5), 0, {6.009, 5.982}, 0.15);
    return c;
}

Check criterion_temporal_order() {
    Check c;
    const auto model = osc::manufactured(osc::brusselator(1.0, 0.5, 1.0, 1.0), osc::CosineModeSolution{});
    const auto mesh = osc::Mesh2D::uniform({}, 16, 16, 5);
    std::vector<osc::Spline2D> solutions;
    std::vector<double> errors;
    for (std::size_t steps : {10u, 20u, 40u}) {
        auto result = osc::AdiSolver(model, mesh, osc::TimeGrid(1.0, steps)).run();
        const auto rep = osc::norms(result.solution, osc::ReferenceField::at_time(*model.exact, 1.0));
        errors.push_back(osc::combined_error(rep, osc::NormKind::L2));
        solutions.push_back(std::move(result.solution));
    }
    const auto d1 = osc::norms(solutions[0], osc::ReferenceField::of(solutions[1]));
    const auto d2 = osc::norms(solutions[1], osc::ReferenceField::of(solutions[2]));
    const double richardson =
        std::log2(osc::combined_error(d1, osc::NormKind::L2) / osc::combined_error(d2, osc::NormKind::L2));
    c.expect(within(richardson, 2.0, 0.2), "Richardson rate " + fmt(richardson) + " vs 2±0.2");
    const double against_exact = std::log2(errors[1] / errors[2]);
    c.detail << "rate against exact solution " << fmt(against_exact) << "; ";
    return c;
}

Check criterion_fixed_point() {
    Check c;
    osc::ScenarioOptions opts;
    opts.output = std::filesystem::temp_directory_path() / "osc_acceptance";
    opts.final_time = 20.0;
    const auto result = osc::run_scenario(osc::find_scenario("example2"), opts);
    const auto stats = result.snapshots.back().stats;
    const double dev = std::max({std::abs(stats[0].min - 2.0), std::abs(stats[0].max - 2.0),
                                 std::abs(stats[1].min - 0.5), std::abs(stats[1].max - 0.5)});
    c.expect(result.snapshots.back().time == 20.0, "final snapshot at t=20");
    c.expect(dev <= 0.01, "max deviation from (2, 0.5) on the 101x101 grid " + fmt(dev) + " <= 0.01");
    std::filesystem::remove_all(opts.output);
    return c;
}

Check criterion_abd() {
    Check c;
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> cells(1, 8), degree(3, 6);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), sigma(0.0, 0.5);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(cells(rng));
        const int r = degree(rng);
        osc::AbdMatrix a = [&] {
            if (trial % 2 == 0) return osc::testing::random_abd(n, static_cast<std::size_t>(r - 1), rng, false);
            // Collocation matrices on random nonuniform partitions.
            std::vector<double> points{0.0};
            for (std::size_t i = 0; i < n; ++i) points.push_back(points.back() + 0.2 + std::abs(unit(rng)));
            const osc::SplineSpace space(osc::Partition1D(points), r);
            return osc::assemble(space, osc::HeatStep{sigma(rng)});
        }();
        std::vector<double> b(a.order());
        for (auto& v : b) v = unit(rng);
        const auto dense = a.to_dense();
        const auto x = osc::solve(osc::factorize(a), b);
        const auto ref = osc::testing::dense_solve(dense, b);
        std::vector<double> diff(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - ref[i];
        worst = std::max(worst, osc::testing::max_abs(diff) / osc::testing::max_abs(ref));
    }
    c.expect(worst <= 1e-9, "200 systems, worst relative difference " + fmt(worst, 3) + " <= 1e-9");

    std::vector<double> logs_n, logs_t;
    for (std::size_t n : {64u, 128u, 256u, 512u}) {
        const osc::SplineSpace space(osc::Partition1D::uniform(0.0, 1.0, n), 4);
        const auto matrix = osc::assemble(space, osc::HeatStep{1e-3});
        const std::vector<double> rhs(matrix.order(), 1.0);
        double best = INFINITY;
        for (int rep = 0; rep < 7; ++rep) {
            const int inner = static_cast<int>(4096 / n);
            const auto t0 = Clock::now();
            double sink = 0.0;
            for (int k = 0; k < inner; ++k) sink += osc::solve(osc::factorize(matrix), rhs)[0];
            const double t = std::chrono::duration<double>(Clock::now() - t0).count() / inner;
            if (sink == 12345.678) std::cout << "";
            best = std::min(best, t);
        }
        logs_n.push_back(std::log(static_cast<double>(n)));
        logs_t.push_back(std::log(best));
    }
    const double mn = std::accumulate(logs_n.begin(), logs_n.end(), 0.0) / logs_n.size();
    const double mt = std::accumulate(logs_t.begin(), logs_t.end(), 0.0) / logs_t.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < logs_n.size(); ++i) {
        num += (logs_n[i] - mn) * (logs_t[i] - mt);
        den += (logs_n[i] - mn) * (logs_n[i] - mn);
    }
    const double slope = num / den;
    c.expect(slope >= 0.8 && slope <= 1.2, "factorize+solve log-log slope " + fmt(slope, 3) + " in [0.8, 1.2]");
    return c;
}

Check criterion_exactness() {
    Check c;
    {
        auto m = osc::brusselator(1.0, 2.0, 0.002, 0.002);
        m.initial = [](double, double) { return osc::State{2.0, 0.5}; };
        const auto mesh = osc::Mesh2D::uniform({}, 6, 6, 4);
        double dev = 0.0;
        osc::RunHooks hooks;
        for (int k = 0; k <= 10; ++k) hooks.snapshot_times.push_back(k);
        hooks.keep_snapshots = false;
        hooks.on_snapshot = [&](const osc::Snapshot& s) {
            for (int comp = 0; comp < 2; ++comp) {
                for (double v : s.values.values[comp]) dev = std::max(dev, std::abs(v - (comp == 0 ? 2.0 : 0.5)));
            }
        };
        (void)osc::AdiSolver(m, mesh, osc::TimeGrid(10.0, 1000)).run(hooks);
        c.expect(dev <= 1e-12, "constant state over 1000 steps, deviation " + fmt(dev, 3) + " <= 1e-12");
    }
    {
        double worst = 0.0;
        for (int r = 3; r <= 6; ++r) {
            auto m = osc::brusselator(1.0, 2.0, 1.0, 1.0);
            m.initial = [r](double x, double y) {
                return osc::State{std::pow(x, r) * y - std::pow(y, r), 2.0 + std::pow(x + y, r)};
            };
            const auto mesh = osc::Mesh2D::uniform({0.0, 1.5, -1.0, 1.0}, 4, 3, r);
            const osc::AdiSolver solver(m, mesh, osc::TimeGrid(1.0, 1));
            const auto [vertical, horizontal] = solver.step1a();
            const auto gx = mesh.x->collocation_points();
            for (std::size_t l = 0; l < gx.size(); ++l) {
                for (double y : {-1.0, -0.61, 0.05, 0.5, 1.0}) {
                    const auto g = m.initial(gx[l], y);
                    for (int comp = 0; comp < 2; ++comp) {
                        worst = std::max(worst, std::abs(mesh.y->evaluate(vertical.line(comp, l), y) - g[comp]));
                    }
                }
            }
        }
        c.expect(worst <= 1e-11, "step1a reproduces degree <= r data, error " + fmt(worst, 3) + " <= 1e-11");
    }
    {
        const auto m = osc::manufactured(osc::brusselator(1.0, 0.5, 1.0, 1.0), osc::CosineModeSolution{});
        const auto mesh = osc::Mesh2D::uniform({}, 12, 10, 4);
        const osc::TimeGrid time(1.0, 50);
        const auto one = osc::AdiSolver(m, mesh, time, 1).run();
        bool same = true;
        for (std::size_t workers : {2u, 4u}) {
            const auto other = osc::AdiSolver(m, mesh, time, workers).run();
            for (int comp = 0; comp < 2; ++comp) {
                const auto a = one.solution.coefficients(comp);
                const auto b = other.solution.coefficients(comp);
                same = same && a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
            }
        }
        c.expect(same, "bitwise identical results for 1, 2 and 4 workers");
    }
    return c;
}

Check criterion_pattern_smoke() {
    Check c;
    const double g0 = osc::gierer_meinhardt_spike_initial(0.04)(0.0, 0.0)[0];
    c.expect(within(g0, 0.51, 5e-3), "Gierer-Meinhardt g1(0,0) = " + fmt(g0) + " ~ 0.51");
    osc::ScenarioOptions opts;
    opts.output = std::filesystem::temp_directory_path() / "osc_acceptance_smoke";
    opts.smoke = true;
    opts.resolution = 41;
    for (const auto& s : osc::scenario_registry()) {
        if (!s.long_running) continue;
        try {
            const auto result = osc::run_scenario(s, opts);
            const auto expected = osc::scenario_times(s, result.config.final_time, true);
            bool files = result.snapshots.size() == expected.size();
            bool finite = result.solution.all_finite();
            for (const auto& snap : result.snapshots) {
                files = files && std::filesystem::exists(snap.file);
                for (const auto& st : snap.stats) finite = finite && std::isfinite(st.min) && std::isfinite(st.max);
            }
            c.expect(files && finite, s.name + " (T=" + fmt(result.config.final_time) + ") " +
                                          std::to_string(result.snapshots.size()) + " snapshots, finite=" +
                                          (finite ? "yes" : "no"));
        } catch (const osc::Error& e) {
            c.expect(false, s.name + " failed: " + e.what());
        }
    }
    std::filesystem::remove_all(opts.output);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        std::string id;
        std::string title;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria{
        {"1", "T1 errors and rates (Brusselator, r=3, L2)", criterion_table1},
        {"2", "T2 rates (H1, r=4)", criterion_table2},
        {"3", "T3 rates (Linf, r=5)", criterion_table3},
        {"4", "T4 nodal superconvergence rates (r=3, r=5)", criterion_table4},
        {"5", "Gray-Scott rates (T5 r=5, T8 r=4)", criterion_gray_scott},
        {"6", "Schnakenberg rates (T10 r=3, T12 r=5)", criterion_schnakenberg},
        {"7", "Second order in time (r=5, N=16)", criterion_temporal_order},
        {"8", "Brusselator settles on (B, A/B) by t=20", criterion_fixed_point},
        {"9", "ABD solver against dense LU and linear cost", criterion_abd},
        {"10", "Exactness invariants", criterion_exactness},
        {"11", "Pattern-formation smoke runs", criterion_pattern_smoke},
    };
    const std::string only = argc > 1 ? argv[1] : "";
    int failed = 0;
    for (const auto& cr : criteria) {
        if (!only.empty() && only != cr.id) continue;
        const auto start = Clock::now();
        Check result;
        try {
            result = cr.run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail << "exception: " << e.what();
        }
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (!result.ok) ++failed;
        std::cout << (result.ok ? "PASS" : "FAIL") << " [" << cr.id << "] " << cr.title << " (" << fmt(seconds, 3)
                  << " s): " << result.detail.str() << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
