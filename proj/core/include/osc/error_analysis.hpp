#pragma once

/// @file error_analysis.hpp
/// @brief Error norms of a tensor-product spline against a known solution and
/// observed convergence rates.

#include "osc/field.hpp"
#include "osc/models.hpp"

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace osc {

/// Reference field with its first partial derivatives.
struct ReferenceField {
    std::function<State(double, double)> value;
    std::function<State(double, double)> dx;
    std::function<State(double, double)> dy;

    [[nodiscard]] static ReferenceField at_time(const CosineModeSolution& exact, double t);
    [[nodiscard]] static ReferenceField of(const Spline2D& spline);
};

struct ComponentErrors {
    double l2 = 0.0;
    double h1 = 0.0;
    double linf = 0.0;
    double nodal_value = 0.0;
    double nodal_dx = 0.0;
    double nodal_dy = 0.0;
};

enum class NormKind { L2, H1, Linf, NodalValue, NodalDx, NodalDy };

[[nodiscard]] std::string_view to_string(NormKind kind) noexcept;
/// Accepts "l2", "h1", "linf", "nodal", "nodal_dx", "nodal_dy".
/// @throws Error(Config) otherwise.
[[nodiscard]] NormKind parse_norm_kind(std::string_view text);

struct ErrorReport {
    int degree = 0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    double h = 0.0;
    double tau = 0.0;
    std::array<ComponentErrors, 2> components;

    [[nodiscard]] double component(int c, NormKind kind) const noexcept;
};

/// Lattice points per cell and axis used for the maximum norm, both cell
/// endpoints included.
inline constexpr int kMaxNormSamples = 10;

/// L2 and H1 by (r+2)-point tensor Gauss quadrature per cell, the maximum norm
/// on a 10 x 10 lattice per cell, nodal errors at every breakpoint pair with
/// the spline evaluated from the cell to the lower left (first cell at the
/// left and bottom edges).
[[nodiscard]] ErrorReport norms(const Spline2D& approx, const ReferenceField& exact, double tau = 0.0);

/// Root sum of squares for L2 and H1, maximum over components for the
/// maximum norm and for all nodal columns.
[[nodiscard]] double combined_error(const ErrorReport& report, NormKind kind) noexcept;

/// log(e1 / e2) / log(h1 / h2).
/// @throws Error(Domain) when an error is not positive or h1 == h2.
[[nodiscard]] double rate(double e1, double h1, double e2, double h2);

struct RateRow {
    double h = 0.0;
    double error = 0.0;
    /// NaN on the first row.
    double rate = 0.0;
};

/// Ordered (h, error) rows with rates between consecutive rows.
class RateTable {
public:
    void add(double h, double error);
    [[nodiscard]] const std::vector<RateRow>& rows() const noexcept { return rows_; }

private:
    std::vector<RateRow> rows_;
};

}  // namespace osc
