#include "osc/mesh_basis.hpp"

#include "osc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace osc {

namespace {

using Poly = std::array<double, kMaxDegree + 1>;

Poly multiply(const Poly& p, const Poly& q) {
    Poly out{};
    for (int i = 0; i <= kMaxDegree; ++i) {
        if (p[i] == 0.0) continue;
        for (int j = 0; i + j <= kMaxDegree; ++j) {
            out[i + j] += p[i] * q[j];
        }
    }
    return out;
}

Poly differentiate(const Poly& p) {
    Poly out{};
    for (int i = 1; i <= kMaxDegree; ++i) out[i - 1] = i * p[i];
    return out;
}

double horner(const Poly& p, int degree, double t) {
    double acc = p[degree];
    for (int i = degree - 1; i >= 0; --i) acc = acc * t + p[i];
    return acc;
}

// Legendre P_m and its derivative at x in [-1, 1].
std::pair<double, double> legendre(int m, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    const double dp = m * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

// ---------------------------------------------------------------------------
// Partition1D

Partition1D::Partition1D(std::vector<double> breakpoints) : points_(std::move(breakpoints)) {
    if (points_.size() < 2) {
        throw Error(ErrorKind::Config, "partition needs at least one cell");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i] > points_[i - 1]) || !std::isfinite(points_[i])) {
            std::ostringstream msg;
            msg << "partition breakpoints must be finite and strictly increasing (index " << i << ")";
            throw Error(ErrorKind::Config, msg.str());
        }
    }
}

Partition1D Partition1D::uniform(double a, double b, std::size_t cells) {
    if (cells == 0) throw Error(ErrorKind::Config, "partition needs at least one cell");
    if (!(b > a)) throw Error(ErrorKind::Config, "partition requires a < b");
    std::vector<double> pts(cells + 1);
    const double n = static_cast<double>(cells);
    for (std::size_t i = 0; i <= cells; ++i) {
        const double s = static_cast<double>(i) / n;
        pts[i] = a + (b - a) * s;
    }
    pts.front() = a;
    pts.back() = b;
    return Partition1D(std::move(pts));
}

double Partition1D::max_width() const noexcept {
    double h = 0.0;
    for (std::size_t c = 0; c < cells(); ++c) h = std::max(h, width(c));
    return h;
}

std::size_t Partition1D::locate(double x) const {
    if (!(x >= a() && x <= b())) {
        std::ostringstream msg;
        msg << "point " << x << " outside [" << a() << ", " << b() << "]";
        throw Error(ErrorKind::Domain, msg.str());
    }
    const auto it = std::upper_bound(points_.begin(), points_.end(), x);
    const auto idx = static_cast<std::size_t>(it - points_.begin());
    return std::min(idx == 0 ? 0 : idx - 1, cells() - 1);
}

// ---------------------------------------------------------------------------
// Gauss rules

GaussRule gauss_rule(int m) {
    if (m < 1 || m > 12) {
        std::ostringstream msg;
        msg << "Gauss rule order " << m << " outside [1, 12]";
        throw Error(ErrorKind::Config, msg.str());
    }
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));

    if (m == 1) {
        rule.nodes = {0.5};
        rule.weights = {1.0};
        return rule;
    }
    if (m == 2) {
        const double d = 0.5 / std::numbers::sqrt3;
        rule.nodes = {0.5 - d, 0.5 + d};
        rule.weights = {0.5, 0.5};
        return rule;
    }
    if (m == 3) {
        const double d = 0.5 * std::sqrt(0.6);
        rule.nodes = {0.5 - d, 0.5, 0.5 + d};
        rule.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        return rule;
    }

    for (int i = 0; i < m; ++i) {
        // Descending roots on [-1, 1]; stored ascending after the map.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(m, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const auto [p, dp] = legendre(m, x);
        (void)p;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto slot = static_cast<std::size_t>(m - 1 - i);
        rule.nodes[slot] = 0.5 * (1.0 + x);
        rule.weights[slot] = 0.5 * w;
    }
    return rule;
}

std::vector<double> collocation_points(const Partition1D& partition, int degree) {
    if (degree < 3) throw Error(ErrorKind::Config, "collocation requires degree r >= 3");
    const GaussRule rule = gauss_rule(degree - 1);
    std::vector<double> pts;
    pts.reserve(partition.cells() * rule.order());
    for (std::size_t c = 0; c < partition.cells(); ++c) {
        const double x0 = partition.point(c);
        const double h = partition.width(c);
        for (double lambda : rule.nodes) pts.push_back(x0 + h * lambda);
    }
    return pts;
}

// ---------------------------------------------------------------------------
// BasisRow

double BasisRow::dot(std::span<const double> coeffs) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) acc += values[j] * coeffs[first_col + j];
    return acc;
}

// ---------------------------------------------------------------------------
// SplineSpace

SplineSpace::SplineSpace(Partition1D partition, int degree)
    : partition_(std::move(partition)), degree_(degree), dim_(0) {
    if (degree < 3 || degree > kMaxDegree) {
        std::ostringstream msg;
        msg << "spline degree " << degree << " outside [3, " << kMaxDegree << "]";
        throw Error(ErrorKind::Config, msg.str());
    }
    const auto r = static_cast<std::size_t>(degree);
    dim_ = partition_.cells() * (r - 1) + 2;
    rule_ = gauss_rule(degree - 1);
    gauss_points_ = osc::collocation_points(partition_, degree);

    // Local basis in t in [0, 1], ordered as the global columns of a cell.
    std::vector<Poly> basis(r + 1, Poly{});
    basis[0] = Poly{1.0, 0.0, -3.0, 2.0};        // value at left end
    basis[1] = Poly{0.0, 1.0, -2.0, 1.0};        // slope at left end (times h)
    basis[r - 1] = Poly{0.0, 0.0, 3.0, -2.0};    // value at right end
    basis[r] = Poly{0.0, 0.0, -1.0, 1.0};        // slope at right end (times h)
    const Poly bubble0{0.0, 0.0, 1.0, -2.0, 1.0};  // t^2 (1-t)^2
    const Poly odd{-1.0, 2.0};                     // 2t - 1
    Poly bubble = bubble0;
    for (std::size_t k = 0; k + 3 < r; ++k) {
        basis[2 + k] = bubble;
        bubble = multiply(bubble, odd);
    }

    for (int d = 0; d < 3; ++d) local_[d].resize(r + 1);
    for (std::size_t j = 0; j <= r; ++j) {
        local_[0][j] = basis[j];
        local_[1][j] = differentiate(basis[j]);
        local_[2][j] = differentiate(local_[1][j]);
    }

    const std::size_t nloc = r + 1;
    const std::size_t ng = r - 1;
    for (int d = 0; d < 3; ++d) {
        auto& table = gauss_rows_[d];
        table.resize(cells() * ng * nloc);
        for (std::size_t c = 0; c < cells(); ++c) {
            const double h = partition_.width(c);
            const double inv = d == 0 ? 1.0 : (d == 1 ? 1.0 / h : 1.0 / (h * h));
            for (std::size_t k = 0; k < ng; ++k) {
                for (std::size_t j = 0; j < nloc; ++j) {
                    table[(c * ng + k) * nloc + j] =
                        horner(local_[d][j], degree_, rule_.nodes[k]) * slope_scale(j, h) * inv;
                }
            }
        }
    }
}

double SplineSpace::slope_scale(std::size_t j, double h) const noexcept {
    return (j == 1 || j == static_cast<std::size_t>(degree_)) ? h : 1.0;
}

BasisRow SplineSpace::basis_row(double x, int deriv) const {
    return basis_row_in_cell(partition_.locate(x), x, deriv);
}

BasisRow SplineSpace::basis_row_in_cell(std::size_t cell, double x, int deriv) const {
    if (deriv < 0 || deriv > 2) throw Error(ErrorKind::Config, "basis derivative order must be 0, 1 or 2");
    if (cell >= cells()) throw Error(ErrorKind::Domain, "cell index out of range");
    const double h = partition_.width(cell);
    const double t = (x - partition_.point(cell)) / h;
    const double inv = deriv == 0 ? 1.0 : (deriv == 1 ? 1.0 / h : 1.0 / (h * h));
    BasisRow row;
    row.first_col = cell_offset(cell);
    row.count = local_size();
    for (std::size_t j = 0; j < row.count; ++j) {
        row.values[j] = horner(local_[deriv][j], degree_, t) * slope_scale(j, h) * inv;
    }
    return row;
}

double SplineSpace::evaluate(std::span<const double> coeffs, double x, int deriv) const {
    if (coeffs.size() != dim_) throw Error(ErrorKind::Dimension, "coefficient vector length != space dimension");
    return basis_row(x, deriv).dot(coeffs);
}

double SplineSpace::evaluate_in_cell(std::span<const double> coeffs, std::size_t cell, double x,
                                     int deriv) const {
    if (coeffs.size() != dim_) throw Error(ErrorKind::Dimension, "coefficient vector length != space dimension");
    return basis_row_in_cell(cell, x, deriv).dot(coeffs);
}

void SplineSpace::evaluate_at_gauss(std::span<const double> coeffs, int deriv, std::span<double> out) const {
    if (coeffs.size() != dim_) throw Error(ErrorKind::Dimension, "coefficient vector length != space dimension");
    if (out.size() != gauss_points_.size()) throw Error(ErrorKind::Dimension, "output length != number of Gauss points");
    if (deriv < 0 || deriv > 2) throw Error(ErrorKind::Config, "basis derivative order must be 0, 1 or 2");
    const std::size_t nloc = local_size();
    const std::size_t ng = gauss_per_cell();
    const double* table = gauss_rows_[deriv].data();
    for (std::size_t c = 0; c < cells(); ++c) {
        const double* cc = coeffs.data() + cell_offset(c);
        for (std::size_t k = 0; k < ng; ++k) {
            const double* row = table + (c * ng + k) * nloc;
            double acc = 0.0;
            for (std::size_t j = 0; j < nloc; ++j) acc += row[j] * cc[j];
            out[c * ng + k] = acc;
        }
    }
}

std::span<const double> SplineSpace::gauss_row(int deriv, std::size_t cell, std::size_t k) const {
    const std::size_t nloc = local_size();
    return {gauss_rows_[deriv].data() + (cell * gauss_per_cell() + k) * nloc, nloc};
}

}  // namespace osc
