#pragma once

/// @file adi.hpp
/// @brief Alternating-direction implicit, extrapolated Crank-Nicolson time
/// stepping of a two-component reaction-diffusion system with homogeneous
/// Neumann data, discretized by spline collocation in space.
///
/// One step from t_n to t_{n+1}:
///   F  = f(ut, t_{n+1/2}) with ut = (3 u^n - u^{n-1}) / 2 at the Gauss grid
///   x sweep: (I - tau/2 D_c d_xx) u^{n+1/2} = u^n + tau/2 D_c u^n_yy + tau/2 F_c
///   y sweep: (I - tau/2 D_c d_yy) u^{n+1}   = u^{n+1/2} + tau/2 D_c u^{n+1/2}_xx + tau/2 F_c
/// with zero end-slope rows on every line. The first step takes ut from a
/// half-step predictor instead of the extrapolation.

#include "osc/collocation.hpp"
#include "osc/field.hpp"
#include "osc/models.hpp"

#include <array>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace osc {

/// Field at one time level together with its Gauss-grid values and the
/// second derivative along the line direction, both x-major.
struct TimeLevel {
    LineFieldSet field;
    GaussGrid values;
    GaussGrid along_d2;
};

struct Snapshot {
    std::size_t level = 0;
    double time = 0.0;
    GaussGrid values;
    Spline2D spline;
};

struct RunHooks {
    /// Times at which to finalize and report; each is rounded to the nearest level.
    std::vector<double> snapshot_times;
    std::function<void(const Snapshot&)> on_snapshot;
    /// Called after each completed step with (n + 1, t_{n+1}).
    std::function<void(std::size_t, double)> on_step;
    /// Keep snapshots in the result (otherwise only delivered to on_snapshot).
    bool keep_snapshots = true;
};

struct RunResult {
    Spline2D solution;
    GaussGrid final_values;
    std::vector<Snapshot> snapshots;
    double seconds = 0.0;
};

class AdiSolver {
public:
    /// workers > 1 distributes the line solves of each sweep over a thread
    /// pool; results do not depend on the worker count.
    AdiSolver(ReactionModel model, Mesh2D mesh, TimeGrid time, std::size_t workers = 1);
    ~AdiSolver();
    AdiSolver(const AdiSolver&) = delete;
    AdiSolver& operator=(const AdiSolver&) = delete;

    [[nodiscard]] const Mesh2D& mesh() const noexcept { return mesh_; }
    [[nodiscard]] const TimeGrid& time_grid() const noexcept { return time_; }
    [[nodiscard]] const ReactionModel& model() const noexcept { return model_; }
    [[nodiscard]] std::size_t workers() const noexcept { return workers_; }

    /// Interpolants of the initial data: vertical lines through the x-Gauss
    /// points and horizontal lines through the y-Gauss points, both with
    /// value end rows.
    [[nodiscard]] std::pair<LineFieldSet, LineFieldSet> step1a() const;

    /// Half-step predictor: vertical splines with zero end slopes
    /// interpolating g + tau/2 [f(g) + D (uh_xx + u_yy)] at the Gauss grid.
    [[nodiscard]] LineFieldSet step1b(const LineFieldSet& vertical, const LineFieldSet& horizontal,
                                      double tau) const;

    /// Values (deriv 0) or along-line derivatives of a line set at the Gauss
    /// grid, always returned x-major.
    [[nodiscard]] GaussGrid gauss_values(const LineFieldSet& field, int deriv) const;

    [[nodiscard]] static GaussGrid extrapolate(const GaussGrid& current, const GaussGrid& previous);

    /// Reaction term (kinetics plus any forcing) at the Gauss grid.
    [[nodiscard]] GaussGrid reaction(const GaussGrid& state, double t) const;

    /// Horizontal half step from the vertical field u^n given the extrapolated state.
    [[nodiscard]] LineFieldSet sweep_x(const LineFieldSet& current, const GaussGrid& extrapolated) const;
    /// Vertical half step from the horizontal field u^{n+1/2}.
    [[nodiscard]] LineFieldSet sweep_y(const LineFieldSet& half, const GaussGrid& extrapolated) const;

    /// Tensor-product spline agreeing with the vertical field on every
    /// vertical line through an x-Gauss point.
    [[nodiscard]] Spline2D finalize(const LineFieldSet& vertical) const;

    /// Full run from t = 0 to T. Errors are rethrown with the time level.
    [[nodiscard]] RunResult run(const RunHooks& hooks = {}) const;

private:
    struct Operators;

    [[nodiscard]] TimeLevel make_level(LineFieldSet field) const;
    [[nodiscard]] LineFieldSet sweep_x_with(const TimeLevel& current, const GaussGrid& forcing) const;
    [[nodiscard]] TimeLevel sweep_y_with(const LineFieldSet& half, const GaussGrid& forcing, double t) const;
    template <class Body>
    void for_lines(std::size_t count, Body&& body) const;

    ReactionModel model_;
    Mesh2D mesh_;
    TimeGrid time_;
    std::size_t workers_;
    std::unique_ptr<Operators> ops_;
};

}  // namespace osc
