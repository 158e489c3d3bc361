#pragma once

/// @file mesh_basis.hpp
/// @brief 1-D partitions, Gauss-Legendre rules and the C1 piecewise-polynomial
/// spline space used by the collocation discretization.
///
/// The spline space of degree r on a partition with N cells has dimension
/// N(r-1)+2. It is spanned by a local Hermite-type basis:
///   - two degrees of freedom per breakpoint: the value and the first
///     derivative (in physical units),
///   - r-3 interior "bubble" functions per cell, t^2 (1-t)^2 (2t-1)^k, which
///     vanish together with their first derivative at both cell ends.
///
/// Global column ordering puts node i's (value, slope) at columns
/// i(r-1), i(r-1)+1 and the bubbles of cell i (0-based) at i(r-1)+2 ...
/// i(r-1)+r-2, so cell i touches the contiguous window
/// [i(r-1), i(r-1)+r] and adjacent windows overlap in exactly two columns.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace osc {

/// Largest polynomial degree the basis tables are sized for.
inline constexpr int kMaxDegree = 10;

/// Ordered breakpoints a = x_0 < x_1 < ... < x_N = b.
class Partition1D {
public:
    explicit Partition1D(std::vector<double> breakpoints);

    static Partition1D uniform(double a, double b, std::size_t cells);

    [[nodiscard]] std::size_t cells() const noexcept { return points_.size() - 1; }
    [[nodiscard]] double a() const noexcept { return points_.front(); }
    [[nodiscard]] double b() const noexcept { return points_.back(); }
    [[nodiscard]] double point(std::size_t i) const { return points_[i]; }
    /// Width of cell c = [x_c, x_{c+1}] (0-based).
    [[nodiscard]] double width(std::size_t c) const { return points_[c + 1] - points_[c]; }
    [[nodiscard]] double max_width() const noexcept;
    [[nodiscard]] std::span<const double> breakpoints() const noexcept { return points_; }

    /// Cell index containing x; the right end b belongs to the last cell and
    /// interior breakpoints belong to the cell on their right.
    /// @throws Error(Domain) when x lies outside [a, b].
    [[nodiscard]] std::size_t locate(double x) const;

private:
    std::vector<double> points_;
};

/// m-point Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t order() const noexcept { return nodes.size(); }
};

/// @throws Error(Config) unless 1 <= m <= 12.
[[nodiscard]] GaussRule gauss_rule(int m);

/// Gauss points x_{c} + h_c * lambda_k of the (r-1)-point rule, ordered by
/// cell then node index.
[[nodiscard]] std::vector<double> collocation_points(const Partition1D& partition, int degree);

/// Dense slice of a basis evaluation row: entries for columns
/// [first_col, first_col + count). All other columns are zero.
struct BasisRow {
    std::size_t first_col = 0;
    std::size_t count = 0;
    std::array<double, kMaxDegree + 1> values{};

    [[nodiscard]] double dot(std::span<const double> coeffs) const;
};

/// C1 piecewise polynomials of degree <= r on a partition. Immutable.
class SplineSpace {
public:
    /// @throws Error(Config) unless 3 <= degree <= kMaxDegree.
    SplineSpace(Partition1D partition, int degree);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t cells() const noexcept { return partition_.cells(); }
    [[nodiscard]] std::size_t local_size() const noexcept { return static_cast<std::size_t>(degree_) + 1; }
    [[nodiscard]] std::size_t gauss_per_cell() const noexcept { return static_cast<std::size_t>(degree_) - 1; }
    [[nodiscard]] std::size_t cell_offset(std::size_t cell) const noexcept { return cell * gauss_per_cell(); }
    [[nodiscard]] const Partition1D& partition() const noexcept { return partition_; }
    [[nodiscard]] const GaussRule& collocation_rule() const noexcept { return rule_; }
    /// All N(r-1) collocation points.
    [[nodiscard]] std::span<const double> collocation_points() const noexcept { return gauss_points_; }

    /// Row of basis values (deriv 0) or x-derivatives (deriv 1, 2) at x.
    /// @throws Error(Domain) when x is outside [a, b].
    [[nodiscard]] BasisRow basis_row(double x, int deriv) const;

    /// Same as basis_row but evaluates the polynomial piece of a given cell,
    /// which also allows one-sided evaluation at breakpoints.
    [[nodiscard]] BasisRow basis_row_in_cell(std::size_t cell, double x, int deriv) const;

    [[nodiscard]] double evaluate(std::span<const double> coeffs, double x, int deriv = 0) const;
    [[nodiscard]] double evaluate_in_cell(std::span<const double> coeffs, std::size_t cell, double x,
                                          int deriv = 0) const;

    /// Values (or derivatives) of the spline at every collocation point.
    /// out.size() must equal N(r-1).
    void evaluate_at_gauss(std::span<const double> coeffs, int deriv, std::span<double> out) const;

    /// Precomputed (r+1) basis entries of cell c at its k-th Gauss node.
    [[nodiscard]] std::span<const double> gauss_row(int deriv, std::size_t cell, std::size_t k) const;

private:
    [[nodiscard]] double slope_scale(std::size_t j, double h) const noexcept;

    Partition1D partition_;
    int degree_;
    std::size_t dim_;
    GaussRule rule_;
    std::vector<double> gauss_points_;
    // local_[d][j] holds the monomial coefficients (in t) of the d-th
    // t-derivative of local basis function j.
    std::array<std::vector<std::array<double, kMaxDegree + 1>>, 3> local_;
    // gauss_rows_[d] is laid out [cell][node][j], physical scaling applied.
    std::array<std::vector<double>, 3> gauss_rows_;
};

}  // namespace osc
