#include "osc/field.hpp"

#include "osc/error.hpp"

#include <algorithm>
#include <cmath>

namespace osc {

Mesh2D Mesh2D::uniform(const Rectangle& domain, std::size_t nx, std::size_t ny, int degree) {
    if (nx == 0 || ny == 0) throw Error(ErrorKind::Config, "mesh needs at least one cell per direction");
    Mesh2D m;
    m.domain = domain;
    m.x = std::make_shared<const SplineSpace>(Partition1D::uniform(domain.x0, domain.x1, nx), degree);
    m.y = std::make_shared<const SplineSpace>(Partition1D::uniform(domain.y0, domain.y1, ny), degree);
    return m;
}

double Mesh2D::max_width() const noexcept {
    return std::max(x->partition().max_width(), y->partition().max_width());
}

TimeGrid::TimeGrid(double final_time_, std::size_t steps_)
    : final_time(final_time_), steps(steps_), requested_step(0.0) {
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
        throw Error(ErrorKind::Config, "final time must be positive");
    }
    if (steps == 0) throw Error(ErrorKind::Config, "number of time steps must be at least 1");
    requested_step = step();
}

TimeGrid TimeGrid::from_step(double final_time, double tau) {
    if (!(final_time > 0.0)) throw Error(ErrorKind::Config, "final time must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::Config, "time step must be positive");
    const double ratio = std::round(final_time / tau);
    TimeGrid g(final_time, static_cast<std::size_t>(std::max(1.0, ratio)));
    g.requested_step = tau;
    return g;
}

double TimeGrid::adjustment() const noexcept { return std::abs(step() - requested_step) / requested_step; }

LineFieldSet::LineFieldSet(Orientation orientation_, std::size_t lines_, std::size_t length_, double time_)
    : orientation(orientation_), lines(lines_), length(length_), time(time_) {
    for (auto& c : coeffs) c.assign(lines * length, 0.0);
}

LineFieldSet LineFieldSet::for_mesh(const Mesh2D& mesh, Orientation orientation, double time) {
    if (orientation == Orientation::Vertical) return {orientation, mesh.gauss_x(), mesh.y->dim(), time};
    return {orientation, mesh.gauss_y(), mesh.x->dim(), time};
}

GaussGrid::GaussGrid(std::size_t nx_, std::size_t ny_) : nx(nx_), ny(ny_) {
    for (auto& v : values) v.assign(nx * ny, 0.0);
}

GaussGrid GaussGrid::for_mesh(const Mesh2D& mesh) { return {mesh.gauss_x(), mesh.gauss_y()}; }

bool GaussGrid::all_finite() const noexcept {
    for (const auto& v : values) {
        if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) return false;
    }
    return true;
}

void transpose(std::span<const double> in, std::size_t rows, std::size_t cols, std::span<double> out) {
    if (in.size() != rows * cols || out.size() != rows * cols) {
        throw Error(ErrorKind::Dimension, "transpose: size mismatch");
    }
    constexpr std::size_t tile = 32;
    for (std::size_t i0 = 0; i0 < rows; i0 += tile) {
        const std::size_t i1 = std::min(rows, i0 + tile);
        for (std::size_t j0 = 0; j0 < cols; j0 += tile) {
            const std::size_t j1 = std::min(cols, j0 + tile);
            for (std::size_t i = i0; i < i1; ++i) {
                for (std::size_t j = j0; j < j1; ++j) out[j * rows + i] = in[i * cols + j];
            }
        }
    }
}

Spline2D::Spline2D(Mesh2D mesh) : mesh_(std::move(mesh)) {
    for (auto& c : coeffs_) c.assign(dim_x() * dim_y(), 0.0);
}

double Spline2D::contract(int c, const BasisRow& rx, const BasisRow& ry) const noexcept {
    const std::size_t my = dim_y();
    const double* base = coeffs_[c].data() + rx.first_col * my + ry.first_col;
    double sum = 0.0;
    for (std::size_t p = 0; p < rx.count; ++p) {
        const double* row = base + p * my;
        double inner = 0.0;
        for (std::size_t q = 0; q < ry.count; ++q) inner += row[q] * ry.values[q];
        sum += rx.values[p] * inner;
    }
    return sum;
}

double Spline2D::value(int c, double x, double y, int dx, int dy) const {
    return contract(c, mesh_.x->basis_row(x, dx), mesh_.y->basis_row(y, dy));
}

State Spline2D::value(double x, double y) const {
    const auto rx = mesh_.x->basis_row(x, 0);
    const auto ry = mesh_.y->basis_row(y, 0);
    return {contract(0, rx, ry), contract(1, rx, ry)};
}

double Spline2D::value_in_cell(int c, std::size_t cx, std::size_t cy, double x, double y, int dx, int dy) const {
    return contract(c, mesh_.x->basis_row_in_cell(cx, x, dx), mesh_.y->basis_row_in_cell(cy, y, dy));
}

bool Spline2D::all_finite() const noexcept {
    for (const auto& v : coeffs_) {
        if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) return false;
    }
    return true;
}

}  // namespace osc
