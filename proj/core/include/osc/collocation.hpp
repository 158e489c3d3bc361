#pragma once

/// @file collocation.hpp
/// @brief Assembly of the 1-D collocation systems used by every ADI step.

#include "osc/abd.hpp"
#include "osc/mesh_basis.hpp"

#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace osc {

/// Interpolate data at {a} + Gauss points + {b}.
struct InterpolateValuesWithEndValues {};
/// Interpolate data at the Gauss points with zero end slopes.
struct InterpolateValuesWithEndDerivZero {};
/// (I - sigma d^2/dx^2) collocated at the Gauss points with zero end slopes.
struct HeatStep {
    double sigma = 0.0;
};

using LineOperatorKind = std::variant<InterpolateValuesWithEndValues, InterpolateValuesWithEndDerivZero, HeatStep>;

/// True when the boundary rows prescribe values rather than slopes.
[[nodiscard]] bool has_value_end_rows(const LineOperatorKind& kind) noexcept;

/// Row order: boundary row at a, Gauss rows by increasing x, boundary row at b.
/// Slope rows are scaled by the adjacent cell width.
[[nodiscard]] AbdMatrix assemble(const SplineSpace& space, const LineOperatorKind& kind);

/// Locations where data enters the right-hand side: {a} + Gauss + {b} for the
/// value kind, Gauss points only for slope kinds.
[[nodiscard]] std::vector<double> interpolation_nodes(const SplineSpace& space, const LineOperatorKind& kind);

/// Second derivative of the spline at each collocation point.
/// @throws Error(Dimension) when coeffs.size() != space.dim().
[[nodiscard]] std::vector<double> second_derivative_at_gauss(const SplineSpace& space,
                                                             std::span<const double> coeffs);

/// A factored collocation operator on one space, reusable for any number of
/// lines. Immutable after construction.
class LineSystem {
public:
    LineSystem(std::shared_ptr<const SplineSpace> space, LineOperatorKind kind);

    [[nodiscard]] const SplineSpace& space() const noexcept { return *space_; }
    [[nodiscard]] const LineOperatorKind& kind() const noexcept { return kind_; }
    [[nodiscard]] const AbdFactorization& factorization() const noexcept { return factorization_; }

    /// Solves for the coefficients given Gauss-point data and the two
    /// boundary-row values (ignored unless has_value_end_rows).
    /// gauss_data.size() == N(r-1), coeffs.size() == dim.
    void solve(std::span<const double> gauss_data, double left, double right, std::span<double> coeffs) const;

private:
    std::shared_ptr<const SplineSpace> space_;
    LineOperatorKind kind_;
    AbdFactorization factorization_;
};

}  // namespace osc
