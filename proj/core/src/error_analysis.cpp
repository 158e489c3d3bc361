#include "osc/error_analysis.hpp"

#include "osc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace osc {

ReferenceField ReferenceField::at_time(const CosineModeSolution& exact, double t) {
    return {[exact, t](double x, double y) { return exact.value(x, y, t); },
            [exact, t](double x, double y) { return exact.grad_x(x, y, t); },
            [exact, t](double x, double y) { return exact.grad_y(x, y, t); }};
}

ReferenceField ReferenceField::of(const Spline2D& spline) {
    return {[&spline](double x, double y) { return spline.value(x, y); },
            [&spline](double x, double y) { return State{spline.value(0, x, y, 1, 0), spline.value(1, x, y, 1, 0)}; },
            [&spline](double x, double y) { return State{spline.value(0, x, y, 0, 1), spline.value(1, x, y, 0, 1)}; }};
}

std::string_view to_string(NormKind kind) noexcept {
    switch (kind) {
        case NormKind::L2: return "l2";
        case NormKind::H1: return "h1";
        case NormKind::Linf: return "linf";
        case NormKind::NodalValue: return "nodal";
        case NormKind::NodalDx: return "nodal_dx";
        case NormKind::NodalDy: return "nodal_dy";
    }
    return "?";
}

NormKind parse_norm_kind(std::string_view text) {
    for (NormKind k : {NormKind::L2, NormKind::H1, NormKind::Linf, NormKind::NodalValue, NormKind::NodalDx,
                       NormKind::NodalDy}) {
        if (to_string(k) == text) return k;
    }
    throw Error(ErrorKind::Config, "unknown norm '" + std::string(text) + "'");
}

double ErrorReport::component(int c, NormKind kind) const noexcept {
    const auto& e = components[c];
    switch (kind) {
        case NormKind::L2: return e.l2;
        case NormKind::H1: return e.h1;
        case NormKind::Linf: return e.linf;
        case NormKind::NodalValue: return e.nodal_value;
        case NormKind::NodalDx: return e.nodal_dx;
        case NormKind::NodalDy: return e.nodal_dy;
    }
    return 0.0;
}

ErrorReport norms(const Spline2D& approx, const ReferenceField& exact, double tau) {
    const Mesh2D& mesh = approx.mesh();
    const auto& px = mesh.x->partition();
    const auto& py = mesh.y->partition();
    const int r = mesh.degree();

    ErrorReport rep;
    rep.degree = r;
    rep.nx = px.cells();
    rep.ny = py.cells();
    rep.h = mesh.max_width();
    rep.tau = tau;

    const GaussRule q = gauss_rule(r + 2);
    std::array<double, 2> l2sq{};
    std::array<double, 2> gradsq{};
    std::array<double, 2> linf{};

    // Cell-wise accumulation in a fixed order.
    for (std::size_t cx = 0; cx < px.cells(); ++cx) {
        const double x0 = px.point(cx);
        const double hx = px.width(cx);
        for (std::size_t cy = 0; cy < py.cells(); ++cy) {
            const double y0 = py.point(cy);
            const double hy = py.width(cy);
            std::array<double, 2> cell_l2{};
            std::array<double, 2> cell_grad{};
            for (std::size_t a = 0; a < q.order(); ++a) {
                const double x = x0 + hx * q.nodes[a];
                for (std::size_t b = 0; b < q.order(); ++b) {
                    const double y = y0 + hy * q.nodes[b];
                    const double w = q.weights[a] * q.weights[b];
                    const State u = exact.value(x, y);
                    const State ux = exact.dx(x, y);
                    const State uy = exact.dy(x, y);
                    for (int c = 0; c < 2; ++c) {
                        const double e = approx.value_in_cell(c, cx, cy, x, y) - u[c];
                        const double ex = approx.value_in_cell(c, cx, cy, x, y, 1, 0) - ux[c];
                        const double ey = approx.value_in_cell(c, cx, cy, x, y, 0, 1) - uy[c];
                        cell_l2[c] += w * e * e;
                        cell_grad[c] += w * (ex * ex + ey * ey);
                    }
                }
            }
            for (int c = 0; c < 2; ++c) {
                l2sq[c] += hx * hy * cell_l2[c];
                gradsq[c] += hx * hy * cell_grad[c];
            }
            for (int a = 0; a < kMaxNormSamples; ++a) {
                const double x = x0 + hx * a / (kMaxNormSamples - 1);
                for (int b = 0; b < kMaxNormSamples; ++b) {
                    const double y = y0 + hy * b / (kMaxNormSamples - 1);
                    const State u = exact.value(x, y);
                    for (int c = 0; c < 2; ++c) {
                        linf[c] = std::max(linf[c], std::abs(approx.value_in_cell(c, cx, cy, x, y) - u[c]));
                    }
                }
            }
        }
    }

    std::array<std::array<double, 3>, 2> nodal{};
    for (std::size_t i = 0; i <= px.cells(); ++i) {
        const double x = px.point(i);
        const std::size_t cx = i == 0 ? 0 : i - 1;
        for (std::size_t j = 0; j <= py.cells(); ++j) {
            const double y = py.point(j);
            const std::size_t cy = j == 0 ? 0 : j - 1;
            const State u = exact.value(x, y);
            const State ux = exact.dx(x, y);
            const State uy = exact.dy(x, y);
            for (int c = 0; c < 2; ++c) {
                nodal[c][0] = std::max(nodal[c][0], std::abs(approx.value_in_cell(c, cx, cy, x, y) - u[c]));
                nodal[c][1] = std::max(nodal[c][1], std::abs(approx.value_in_cell(c, cx, cy, x, y, 1, 0) - ux[c]));
                nodal[c][2] = std::max(nodal[c][2], std::abs(approx.value_in_cell(c, cx, cy, x, y, 0, 1) - uy[c]));
            }
        }
    }

    for (int c = 0; c < 2; ++c) {
        auto& e = rep.components[c];
        e.l2 = std::sqrt(l2sq[c]);
        e.h1 = std::sqrt(l2sq[c] + gradsq[c]);
        e.linf = linf[c];
        e.nodal_value = nodal[c][0];
        e.nodal_dx = nodal[c][1];
        e.nodal_dy = nodal[c][2];
    }
    return rep;
}

double combined_error(const ErrorReport& report, NormKind kind) noexcept {
    const double a = report.component(0, kind);
    const double b = report.component(1, kind);
    if (kind == NormKind::L2 || kind == NormKind::H1) return std::sqrt(a * a + b * b);
    return std::max(a, b);
}

double rate(double e1, double h1, double e2, double h2) {
    if (!(e1 > 0.0) || !(e2 > 0.0)) throw Error(ErrorKind::Domain, "rate undefined for nonpositive errors");
    if (!(h1 > 0.0) || !(h2 > 0.0) || h1 == h2) {
        throw Error(ErrorKind::Domain, "rate undefined for equal or nonpositive widths");
    }
    return std::log(e1 / e2) / std::log(h1 / h2);
}

void RateTable::add(double h, double error) {
    RateRow row{h, error, std::numeric_limits<double>::quiet_NaN()};
    if (!rows_.empty()) row.rate = rate(rows_.back().error, rows_.back().h, error, h);
    rows_.push_back(row);
}

}  // namespace osc
