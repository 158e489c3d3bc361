#pragma once

/// @file field.hpp
/// @brief Discrete fields on a tensor-product mesh: line coefficient sets,
/// values on the Gauss grid, and the final tensor-product spline.

#include "osc/mesh_basis.hpp"
#include "osc/models.hpp"

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace osc {

/// Pair of spline spaces on a rectangle.
struct Mesh2D {
    Rectangle domain;
    std::shared_ptr<const SplineSpace> x;
    std::shared_ptr<const SplineSpace> y;

    /// @throws Error(Config) for cells == 0 or an unsupported degree.
    static Mesh2D uniform(const Rectangle& domain, std::size_t nx, std::size_t ny, int degree);

    [[nodiscard]] int degree() const noexcept { return x->degree(); }
    /// max(hx, hy).
    [[nodiscard]] double max_width() const noexcept;
    [[nodiscard]] std::size_t gauss_x() const noexcept { return x->collocation_points().size(); }
    [[nodiscard]] std::size_t gauss_y() const noexcept { return y->collocation_points().size(); }
};

/// Uniform time levels t_n = n * step(), n = 0..steps.
struct TimeGrid {
    double final_time = 1.0;
    std::size_t steps = 1;
    /// Step length that was asked for; equals step() unless built by from_step.
    double requested_step = 1.0;

    /// @throws Error(Config) unless final_time > 0 and steps >= 1.
    TimeGrid(double final_time, std::size_t steps);

    /// steps = round(T / tau), at least 1.
    /// @throws Error(Config) unless T > 0 and tau > 0.
    static TimeGrid from_step(double final_time, double tau);

    [[nodiscard]] double step() const noexcept { return final_time / static_cast<double>(steps); }
    [[nodiscard]] double time(std::size_t n) const noexcept {
        return final_time * static_cast<double>(n) / static_cast<double>(steps);
    }
    /// Relative change between the requested and the actual step.
    [[nodiscard]] double adjustment() const noexcept;
};

enum class Orientation { Vertical, Horizontal };

/// One coefficient vector per line and component. Vertical sets hold one
/// y-spline per x-Gauss point, horizontal sets one x-spline per y-Gauss point.
/// Storage is contiguous per line: coeffs[c][line * length + k].
struct LineFieldSet {
    Orientation orientation = Orientation::Vertical;
    std::size_t lines = 0;
    std::size_t length = 0;
    double time = 0.0;
    std::array<std::vector<double>, 2> coeffs;

    LineFieldSet() = default;
    LineFieldSet(Orientation orientation, std::size_t lines, std::size_t length, double time = 0.0);
    /// Empty set shaped for the given mesh.
    static LineFieldSet for_mesh(const Mesh2D& mesh, Orientation orientation, double time = 0.0);

    [[nodiscard]] std::span<double> line(int c, std::size_t l) noexcept {
        return {coeffs[c].data() + l * length, length};
    }
    [[nodiscard]] std::span<const double> line(int c, std::size_t l) const noexcept {
        return {coeffs[c].data() + l * length, length};
    }
};

/// Values at the tensor Gauss points, x-major: values[c][i * ny + j].
struct GaussGrid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::array<std::vector<double>, 2> values;

    GaussGrid() = default;
    GaussGrid(std::size_t nx, std::size_t ny);
    static GaussGrid for_mesh(const Mesh2D& mesh);

    [[nodiscard]] double& at(int c, std::size_t i, std::size_t j) noexcept { return values[c][i * ny + j]; }
    [[nodiscard]] double at(int c, std::size_t i, std::size_t j) const noexcept { return values[c][i * ny + j]; }
    [[nodiscard]] bool all_finite() const noexcept;
};

/// Copies an (rows x cols) row-major array into its (cols x rows) transpose.
void transpose(std::span<const double> in, std::size_t rows, std::size_t cols, std::span<double> out);

/// u(x, y) = sum_pq C[p][q] phi_p(x) psi_q(y), one coefficient array per
/// component, stored coeffs[c][p * dim_y + q].
class Spline2D {
public:
    explicit Spline2D(Mesh2D mesh);

    [[nodiscard]] const Mesh2D& mesh() const noexcept { return mesh_; }
    [[nodiscard]] std::size_t dim_x() const noexcept { return mesh_.x->dim(); }
    [[nodiscard]] std::size_t dim_y() const noexcept { return mesh_.y->dim(); }

    [[nodiscard]] double& coeff(int c, std::size_t p, std::size_t q) noexcept {
        return coeffs_[c][p * dim_y() + q];
    }
    [[nodiscard]] double coeff(int c, std::size_t p, std::size_t q) const noexcept {
        return coeffs_[c][p * dim_y() + q];
    }
    [[nodiscard]] std::span<const double> coefficients(int c) const noexcept { return coeffs_[c]; }

    /// Component c or its partial derivatives of order (dx, dy), each <= 2.
    /// @throws Error(Domain) outside the rectangle.
    [[nodiscard]] double value(int c, double x, double y, int dx = 0, int dy = 0) const;
    [[nodiscard]] State value(double x, double y) const;
    /// Evaluates the polynomial piece of cell (cx, cy); used for one-sided
    /// evaluation at breakpoints.
    [[nodiscard]] double value_in_cell(int c, std::size_t cx, std::size_t cy, double x, double y, int dx = 0,
                                       int dy = 0) const;
    [[nodiscard]] bool all_finite() const noexcept;

private:
    [[nodiscard]] double contract(int c, const BasisRow& rx, const BasisRow& ry) const noexcept;

    Mesh2D mesh_;
    std::array<std::vector<double>, 2> coeffs_;
};

}  // namespace osc
