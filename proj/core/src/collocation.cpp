#include "osc/collocation.hpp"

#include "osc/error.hpp"

#include <algorithm>

namespace osc {

bool has_value_end_rows(const LineOperatorKind& kind) noexcept {
    return std::holds_alternative<InterpolateValuesWithEndValues>(kind);
}

AbdMatrix assemble(const SplineSpace& space, const LineOperatorKind& kind) {
    const std::size_t nc = space.cells();
    const std::size_t ng = space.gauss_per_cell();
    const std::size_t nloc = space.local_size();
    AbdMatrix a(nc, ng);

    const double sigma = std::holds_alternative<HeatStep>(kind) ? std::get<HeatStep>(kind).sigma : 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t k = 0; k < ng; ++k) {
            const auto v = space.gauss_row(0, c, k);
            const auto d2 = space.gauss_row(2, c, k);
            auto row = a.block_row(c, k);
            for (std::size_t j = 0; j < nloc; ++j) row[j] = sigma == 0.0 ? v[j] : v[j] - sigma * d2[j];
        }
    }

    const auto& part = space.partition();
    const std::size_t last = nc - 1;
    if (has_value_end_rows(kind)) {
        const auto left = space.basis_row_in_cell(0, part.a(), 0);
        const auto right = space.basis_row_in_cell(last, part.b(), 0);
        a.top()[0] = left.values[0];
        a.top()[1] = left.values[1];
        a.bottom()[0] = right.values[nloc - 2];
        a.bottom()[1] = right.values[nloc - 1];
    } else {
        const double h0 = part.width(0);
        const double hn = part.width(last);
        const auto left = space.basis_row_in_cell(0, part.a(), 1);
        const auto right = space.basis_row_in_cell(last, part.b(), 1);
        a.top()[0] = h0 * left.values[0];
        a.top()[1] = h0 * left.values[1];
        a.bottom()[0] = hn * right.values[nloc - 2];
        a.bottom()[1] = hn * right.values[nloc - 1];
    }
    return a;
}

std::vector<double> interpolation_nodes(const SplineSpace& space, const LineOperatorKind& kind) {
    const auto gauss = space.collocation_points();
    std::vector<double> nodes;
    nodes.reserve(gauss.size() + 2);
    const bool values = has_value_end_rows(kind);
    if (values) nodes.push_back(space.partition().a());
    nodes.insert(nodes.end(), gauss.begin(), gauss.end());
    if (values) nodes.push_back(space.partition().b());
    return nodes;
}

std::vector<double> second_derivative_at_gauss(const SplineSpace& space, std::span<const double> coeffs) {
    std::vector<double> out(space.collocation_points().size());
    space.evaluate_at_gauss(coeffs, 2, out);
    return out;
}

LineSystem::LineSystem(std::shared_ptr<const SplineSpace> space, LineOperatorKind kind)
    : space_(std::move(space)), kind_(kind), factorization_(assemble(*space_, kind_)) {}

void LineSystem::solve(std::span<const double> gauss_data, double left, double right,
                       std::span<double> coeffs) const {
    const std::size_t m = space_->dim();
    if (gauss_data.size() + 2 != m || coeffs.size() != m) {
        throw Error(ErrorKind::Dimension, "line solve: data length does not match the spline space");
    }
    const bool values = has_value_end_rows(kind_);
    coeffs[0] = values ? left : 0.0;
    std::copy(gauss_data.begin(), gauss_data.end(), coeffs.begin() + 1);
    coeffs[m - 1] = values ? right : 0.0;
    factorization_.solve(coeffs);
}

}  // namespace osc
