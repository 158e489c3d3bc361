#include "osc/adi.hpp"

#include "osc/error.hpp"

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

namespace osc {

struct AdiSolver::Operators {
    std::array<std::optional<LineSystem>, 2> heat_x;
    std::array<std::optional<LineSystem>, 2> heat_y;
    std::optional<LineSystem> values_x;
    std::optional<LineSystem> values_y;
    std::optional<LineSystem> slopes_x;
    std::optional<LineSystem> slopes_y;
    std::optional<KineticsEvaluator> kinetics;
    // Lets the requested worker count exceed the hardware concurrency.
    std::optional<tbb::global_control> parallelism;
    std::optional<tbb::task_arena> arena;
};

AdiSolver::AdiSolver(ReactionModel model, Mesh2D mesh, TimeGrid time, std::size_t workers)
    : model_(std::move(model)),
      mesh_(std::move(mesh)),
      time_(time),
      workers_(std::max<std::size_t>(1, workers)),
      ops_(std::make_unique<Operators>()) {
    if (!mesh_.x || !mesh_.y) throw Error(ErrorKind::Config, "mesh has no spline spaces");
    if (mesh_.x->degree() != mesh_.y->degree()) {
        throw Error(ErrorKind::Config, "x and y spline spaces must share the degree");
    }
    for (int c = 0; c < 2; ++c) {
        if (!(model_.diffusion[c] >= 0.0)) throw Error(ErrorKind::Config, "diffusion coefficients must be >= 0");
    }
    if (!model_.initial) throw Error(ErrorKind::Config, "model has no initial data");

    const double half = 0.5 * time_.step();
    for (int c = 0; c < 2; ++c) {
        ops_->heat_x[c].emplace(mesh_.x, HeatStep{half * model_.diffusion[c]});
        ops_->heat_y[c].emplace(mesh_.y, HeatStep{half * model_.diffusion[c]});
    }
    ops_->values_x.emplace(mesh_.x, InterpolateValuesWithEndValues{});
    ops_->values_y.emplace(mesh_.y, InterpolateValuesWithEndValues{});
    ops_->slopes_x.emplace(mesh_.x, InterpolateValuesWithEndDerivZero{});
    ops_->slopes_y.emplace(mesh_.y, InterpolateValuesWithEndDerivZero{});
    ops_->kinetics.emplace(model_, mesh_.x->collocation_points(), mesh_.y->collocation_points());
    if (workers_ > 1) {
        ops_->parallelism.emplace(tbb::global_control::max_allowed_parallelism, workers_);
        ops_->arena.emplace(static_cast<int>(workers_));
    }
}

AdiSolver::~AdiSolver() = default;

template <class Body>
void AdiSolver::for_lines(std::size_t count, Body&& body) const {
    if (!ops_->arena) {
        for (std::size_t l = 0; l < count; ++l) body(l);
        return;
    }
    ops_->arena->execute([&] {
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, count), [&](const tbb::blocked_range<std::size_t>& r) {
            for (std::size_t l = r.begin(); l != r.end(); ++l) body(l);
        });
    });
}

std::pair<LineFieldSet, LineFieldSet> AdiSolver::step1a() const {
    const auto gx = mesh_.x->collocation_points();
    const auto gy = mesh_.y->collocation_points();
    const auto& d = mesh_.domain;
    const std::size_t nx = gx.size();
    const std::size_t ny = gy.size();

    auto vertical = LineFieldSet::for_mesh(mesh_, Orientation::Vertical, 0.0);
    auto horizontal = LineFieldSet::for_mesh(mesh_, Orientation::Horizontal, 0.0);

    // g at the Gauss grid, x-major, and its transpose.
    GaussGrid g(nx, ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const State s = model_.initial_value(gx[i], gy[j]);
            g.at(0, i, j) = s[0];
            g.at(1, i, j) = s[1];
        }
    }
    std::array<std::vector<double>, 2> gt;
    for (int c = 0; c < 2; ++c) {
        gt[c].resize(nx * ny);
        transpose(g.values[c], nx, ny, gt[c]);
    }

    for_lines(nx, [&](std::size_t i) {
        const State lo = model_.initial_value(gx[i], d.y0);
        const State hi = model_.initial_value(gx[i], d.y1);
        for (int c = 0; c < 2; ++c) {
            ops_->values_y->solve({g.values[c].data() + i * ny, ny}, lo[c], hi[c], vertical.line(c, i));
        }
    });
    for_lines(ny, [&](std::size_t j) {
        const State lo = model_.initial_value(d.x0, gy[j]);
        const State hi = model_.initial_value(d.x1, gy[j]);
        for (int c = 0; c < 2; ++c) {
            ops_->values_x->solve({gt[c].data() + j * nx, nx}, lo[c], hi[c], horizontal.line(c, j));
        }
    });
    return {std::move(vertical), std::move(horizontal)};
}

GaussGrid AdiSolver::gauss_values(const LineFieldSet& field, int deriv) const {
    GaussGrid out = GaussGrid::for_mesh(mesh_);
    const std::size_t nx = out.nx;
    const std::size_t ny = out.ny;
    if (field.orientation == Orientation::Vertical) {
        if (field.lines != nx || field.length != mesh_.y->dim()) {
            throw Error(ErrorKind::Dimension, "vertical line set does not match the mesh");
        }
        for_lines(nx, [&](std::size_t i) {
            for (int c = 0; c < 2; ++c) {
                mesh_.y->evaluate_at_gauss(field.line(c, i), deriv, {out.values[c].data() + i * ny, ny});
            }
        });
        return out;
    }
    if (field.lines != ny || field.length != mesh_.x->dim()) {
        throw Error(ErrorKind::Dimension, "horizontal line set does not match the mesh");
    }
    std::vector<double> by_row(nx * ny);
    for (int c = 0; c < 2; ++c) {
        for_lines(ny, [&](std::size_t j) {
            mesh_.x->evaluate_at_gauss(field.line(c, j), deriv, {by_row.data() + j * nx, nx});
        });
        transpose(by_row, ny, nx, out.values[c]);
    }
    return out;
}

GaussGrid AdiSolver::reaction(const GaussGrid& state, double t) const {
    GaussGrid f(state.nx, state.ny);
    for_lines(state.nx, [&](std::size_t i) {
        ops_->kinetics->evaluate(t, state.values[0], state.values[1], f.values[0], f.values[1], i, i + 1);
    });
    return f;
}

LineFieldSet AdiSolver::step1b(const LineFieldSet& vertical, const LineFieldSet& horizontal, double tau) const {
    if (vertical.orientation != Orientation::Vertical || horizontal.orientation != Orientation::Horizontal) {
        throw Error(ErrorKind::Dimension, "step1b expects a vertical and a horizontal line set");
    }
    const auto gx = mesh_.x->collocation_points();
    const auto gy = mesh_.y->collocation_points();
    const std::size_t nx = gx.size();
    const std::size_t ny = gy.size();

    GaussGrid g(nx, ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const State s = model_.initial_value(gx[i], gy[j]);
            g.at(0, i, j) = s[0];
            g.at(1, i, j) = s[1];
        }
    }
    const GaussGrid uyy = gauss_values(vertical, 2);
    const GaussGrid uxx = gauss_values(horizontal, 2);
    const GaussGrid f = reaction(g, 0.0);

    GaussGrid data(nx, ny);
    for (int c = 0; c < 2; ++c) {
        const double dc = model_.diffusion[c];
        for (std::size_t p = 0; p < nx * ny; ++p) {
            data.values[c][p] =
                g.values[c][p] + 0.5 * tau * (f.values[c][p] + dc * (uxx.values[c][p] + uyy.values[c][p]));
        }
    }
    auto out = LineFieldSet::for_mesh(mesh_, Orientation::Vertical, 0.5 * tau);
    for_lines(nx, [&](std::size_t i) {
        for (int c = 0; c < 2; ++c) {
            ops_->slopes_y->solve({data.values[c].data() + i * ny, ny}, 0.0, 0.0, out.line(c, i));
        }
    });
    return out;
}

GaussGrid AdiSolver::extrapolate(const GaussGrid& current, const GaussGrid& previous) {
    if (current.nx != previous.nx || current.ny != previous.ny) {
        throw Error(ErrorKind::Dimension, "extrapolate: grid shapes differ");
    }
    GaussGrid out(current.nx, current.ny);
    for (int c = 0; c < 2; ++c) {
        for (std::size_t p = 0; p < out.values[c].size(); ++p) {
            out.values[c][p] = 0.5 * (3.0 * current.values[c][p] - previous.values[c][p]);
        }
    }
    return out;
}

TimeLevel AdiSolver::make_level(LineFieldSet field) const {
    TimeLevel level{std::move(field), GaussGrid::for_mesh(mesh_), GaussGrid::for_mesh(mesh_)};
    const std::size_t ny = level.values.ny;
    for_lines(level.values.nx, [&](std::size_t i) {
        for (int c = 0; c < 2; ++c) {
            const auto line = level.field.line(c, i);
            mesh_.y->evaluate_at_gauss(line, 0, {level.values.values[c].data() + i * ny, ny});
            mesh_.y->evaluate_at_gauss(line, 2, {level.along_d2.values[c].data() + i * ny, ny});
        }
    });
    return level;
}

LineFieldSet AdiSolver::sweep_x_with(const TimeLevel& current, const GaussGrid& forcing) const {
    const std::size_t nx = current.values.nx;
    const std::size_t ny = current.values.ny;
    const double half = 0.5 * time_.step();
    auto out = LineFieldSet::for_mesh(mesh_, Orientation::Horizontal, current.field.time + half);
    std::vector<double> rhs(nx * ny);
    std::vector<double> rhs_t(nx * ny);
    for (int c = 0; c < 2; ++c) {
        const double sigma = half * model_.diffusion[c];
        const auto& v = current.values.values[c];
        const auto& d2 = current.along_d2.values[c];
        const auto& f = forcing.values[c];
        for (std::size_t p = 0; p < nx * ny; ++p) rhs[p] = v[p] + sigma * d2[p] + half * f[p];
        transpose(rhs, nx, ny, rhs_t);
        const LineSystem& op = *ops_->heat_x[c];
        for_lines(ny, [&](std::size_t j) { op.solve({rhs_t.data() + j * nx, nx}, 0.0, 0.0, out.line(c, j)); });
    }
    return out;
}

TimeLevel AdiSolver::sweep_y_with(const LineFieldSet& half_field, const GaussGrid& forcing, double t) const {
    const std::size_t nx = mesh_.gauss_x();
    const std::size_t ny = mesh_.gauss_y();
    const double half = 0.5 * time_.step();
    auto out = LineFieldSet::for_mesh(mesh_, Orientation::Vertical, t);
    std::vector<double> rhs_t(nx * ny);
    std::vector<double> d2_t(nx * ny);
    std::vector<double> rhs(nx * ny);
    for (int c = 0; c < 2; ++c) {
        const double sigma = half * model_.diffusion[c];
        const auto& f = forcing.values[c];
        for_lines(ny, [&](std::size_t j) {
            double* row = rhs_t.data() + j * nx;
            double* d2 = d2_t.data() + j * nx;
            mesh_.x->evaluate_at_gauss(half_field.line(c, j), 0, {row, nx});
            mesh_.x->evaluate_at_gauss(half_field.line(c, j), 2, {d2, nx});
            for (std::size_t i = 0; i < nx; ++i) row[i] += sigma * d2[i] + half * f[i * ny + j];
        });
        transpose(rhs_t, ny, nx, rhs);
        const LineSystem& op = *ops_->heat_y[c];
        for_lines(nx, [&](std::size_t i) { op.solve({rhs.data() + i * ny, ny}, 0.0, 0.0, out.line(c, i)); });
    }
    return make_level(std::move(out));
}

LineFieldSet AdiSolver::sweep_x(const LineFieldSet& current, const GaussGrid& extrapolated) const {
    if (current.orientation != Orientation::Vertical) {
        throw Error(ErrorKind::Dimension, "sweep_x expects a vertical line set");
    }
    const double t_half = current.time + 0.5 * time_.step();
    return sweep_x_with(make_level(current), reaction(extrapolated, t_half));
}

LineFieldSet AdiSolver::sweep_y(const LineFieldSet& half, const GaussGrid& extrapolated) const {
    if (half.orientation != Orientation::Horizontal) {
        throw Error(ErrorKind::Dimension, "sweep_y expects a horizontal line set");
    }
    return sweep_y_with(half, reaction(extrapolated, half.time), half.time + 0.5 * time_.step()).field;
}

Spline2D AdiSolver::finalize(const LineFieldSet& vertical) const {
    if (vertical.orientation != Orientation::Vertical || vertical.lines != mesh_.gauss_x() ||
        vertical.length != mesh_.y->dim()) {
        throw Error(ErrorKind::Dimension, "finalize expects a vertical line set matching the mesh");
    }
    const SplineSpace& sx = *mesh_.x;
    const SplineSpace& sy = *mesh_.y;
    const std::size_t nx = sx.collocation_points().size();
    const std::size_t mx = sx.dim();
    const std::size_t my = sy.dim();
    const auto y_nodes = interpolation_nodes(sy, InterpolateValuesWithEndValues{});

    // Rows of the y basis at every node, shared by all lines.
    std::vector<BasisRow> y_rows;
    y_rows.reserve(my);
    for (double y : y_nodes) y_rows.push_back(sy.basis_row(y, 0));
    const BasisRow left = sx.basis_row(mesh_.domain.x0, 0);
    const BasisRow right = sx.basis_row(mesh_.domain.x1, 0);

    Spline2D out(mesh_);
    for (int c = 0; c < 2; ++c) {
        // Line values at (x-Gauss point i, y node m), stored m-major for the x solves.
        std::vector<double> at_nodes(my * nx);
        for (std::size_t i = 0; i < nx; ++i) {
            const auto line = vertical.line(c, i);
            for (std::size_t m = 0; m < my; ++m) at_nodes[m * nx + i] = y_rows[m].dot(line);
        }
        // Horizontal splines with zero end slopes through each y node, read at x = a and x = b.
        std::vector<double> at_left(my);
        std::vector<double> at_right(my);
        for_lines(my, [&](std::size_t m) {
            std::vector<double> h(mx);
            ops_->slopes_x->solve({at_nodes.data() + m * nx, nx}, 0.0, 0.0, h);
            at_left[m] = left.dot(h);
            at_right[m] = right.dot(h);
        });
        // Edge splines in y through the boundary values.
        std::vector<double> edge_left(my);
        std::vector<double> edge_right(my);
        ops_->values_y->solve({at_left.data() + 1, my - 2}, at_left.front(), at_left.back(), edge_left);
        ops_->values_y->solve({at_right.data() + 1, my - 2}, at_right.front(), at_right.back(), edge_right);
        // Per y coefficient: interpolate the line coefficients across x.
        std::vector<double> by_q(my * nx);
        for (std::size_t i = 0; i < nx; ++i) {
            const auto line = vertical.line(c, i);
            for (std::size_t q = 0; q < my; ++q) by_q[q * nx + i] = line[q];
        }
        for_lines(my, [&](std::size_t q) {
            std::vector<double> col(mx);
            ops_->values_x->solve({by_q.data() + q * nx, nx}, edge_left[q], edge_right[q], col);
            for (std::size_t p = 0; p < mx; ++p) out.coeff(c, p, q) = col[p];
        });
    }
    return out;
}

RunResult AdiSolver::run(const RunHooks& hooks) const {
    const auto start = std::chrono::steady_clock::now();
    const double tau = time_.step();

    // Requested snapshot levels.
    std::map<std::size_t, std::vector<double>> wanted;
    for (double t : hooks.snapshot_times) {
        if (!(t >= -1e-12 * time_.final_time) || t > time_.final_time * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "snapshot time " << t << " outside [0, " << time_.final_time << "]";
            throw Error(ErrorKind::Config, msg.str());
        }
        wanted[static_cast<std::size_t>(std::llround(t / tau))].push_back(t);
    }

    std::vector<Snapshot> kept;
    auto report = [&](std::size_t level, const TimeLevel& state) {
        if (!wanted.contains(level)) return;
        Snapshot snap{level, time_.time(level), state.values, finalize(state.field)};
        if (hooks.on_snapshot) hooks.on_snapshot(snap);
        if (hooks.keep_snapshots) kept.push_back(std::move(snap));
    };

    auto tagged = [&](std::size_t level, auto&& body) {
        try {
            body();
        } catch (const SingularMatrixError& e) {
            std::ostringstream msg;
            msg << "time level " << level << " (t = " << time_.time(level) << "): " << e.what();
            throw SingularMatrixError(e.row(), msg.str());
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "time level " << level << " (t = " << time_.time(level) << "): " << e.what();
            throw Error(e.kind(), msg.str());
        }
    };

    TimeLevel current;
    GaussGrid extrapolated;
    tagged(0, [&] {
        auto [vertical, horizontal] = step1a();
        const LineFieldSet predictor = step1b(vertical, horizontal, tau);
        extrapolated = gauss_values(predictor, 0);
        current = make_level(std::move(vertical));
    });
    report(0, current);

    for (std::size_t n = 0; n < time_.steps; ++n) {
        tagged(n + 1, [&] {
            const GaussGrid f = reaction(extrapolated, time_.time(n) + 0.5 * tau);
            const LineFieldSet half = sweep_x_with(current, f);
            TimeLevel next = sweep_y_with(half, f, time_.time(n + 1));
            extrapolated = extrapolate(next.values, current.values);
            current = std::move(next);
        });
        if (hooks.on_step) hooks.on_step(n + 1, time_.time(n + 1));
        report(n + 1, current);
    }

    Spline2D solution(mesh_);
    tagged(time_.steps, [&] { solution = finalize(current.field); });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return RunResult{std::move(solution), std::move(current.values), std::move(kept), seconds};
}

}  // namespace osc
