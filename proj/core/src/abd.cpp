#include "osc/abd.hpp"

#include "osc/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace osc {

// ---------------------------------------------------------------------------
// AbdMatrix

AbdMatrix::AbdMatrix(std::size_t blocks, std::size_t block_rows) : blocks_(blocks), block_rows_(block_rows) {
    if (blocks == 0 || block_rows == 0) {
        throw Error(ErrorKind::Config, "ABD matrix needs at least one block with at least one row");
    }
    blocks_data_.assign(blocks_ * block_rows_ * block_cols(), 0.0);
}

std::vector<double> AbdMatrix::multiply(std::span<const double> x) const {
    const std::size_t m = order();
    if (x.size() != m) throw Error(ErrorKind::Dimension, "ABD multiply: vector length != order");
    std::vector<double> y(m, 0.0);
    y[0] = top_[0] * x[0] + top_[1] * x[1];
    const std::size_t bc = block_cols();
    for (std::size_t k = 0; k < blocks_; ++k) {
        const std::size_t c0 = block_col_offset(k);
        const std::size_t r0 = block_row_offset(k);
        for (std::size_t i = 0; i < block_rows_; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < bc; ++j) acc += block(k, i, j) * x[c0 + j];
            y[r0 + i] = acc;
        }
    }
    y[m - 1] = bottom_[0] * x[m - 2] + bottom_[1] * x[m - 1];
    return y;
}

std::vector<double> AbdMatrix::to_dense() const {
    const std::size_t m = order();
    std::vector<double> dense(m * m, 0.0);
    dense[0] = top_[0];
    dense[1] = top_[1];
    for (std::size_t k = 0; k < blocks_; ++k) {
        const std::size_t c0 = block_col_offset(k);
        const std::size_t r0 = block_row_offset(k);
        for (std::size_t i = 0; i < block_rows_; ++i) {
            for (std::size_t j = 0; j < block_cols(); ++j) dense[(r0 + i) * m + c0 + j] = block(k, i, j);
        }
    }
    dense[(m - 1) * m + m - 2] = bottom_[0];
    dense[(m - 1) * m + m - 1] = bottom_[1];
    return dense;
}

double AbdMatrix::norm_inf() const {
    double norm = std::abs(top_[0]) + std::abs(top_[1]);
    norm = std::max(norm, std::abs(bottom_[0]) + std::abs(bottom_[1]));
    for (std::size_t k = 0; k < blocks_; ++k) {
        for (std::size_t i = 0; i < block_rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < block_cols(); ++j) s += std::abs(block(k, i, j));
            norm = std::max(norm, s);
        }
    }
    return norm;
}

// ---------------------------------------------------------------------------
// AbdFactorization

AbdFactorization::AbdFactorization(AbdMatrix matrix) : lu_(std::move(matrix)) {
    row_pivot_.assign(lu_.blocks() * (lu_.block_rows() - 1), 0);
    col_swap_.assign(lu_.blocks() + 1, 0);
    eliminate();
}

void AbdFactorization::check_pivot(double pivot, std::size_t row) const {
    if (!(std::abs(pivot) >= kPivotFloor)) {
        std::ostringstream msg;
        msg << "singular ABD matrix: zero pivot at row " << row;
        throw SingularMatrixError(row, msg.str());
    }
}

void AbdFactorization::eliminate() {
    const std::size_t nb = lu_.blocks();
    const std::size_t br = lu_.block_rows();
    const std::size_t bc = lu_.block_cols();
    const std::size_t lr = br - 1;  // row left over after row elimination

    // Top row: column elimination over columns 0 and 1.
    {
        double* top = lu_.top_;
        if (std::abs(top[1]) > std::abs(top[0])) {
            col_swap_[0] = 1;
            std::swap(top[0], top[1]);
            for (std::size_t i = 0; i < br; ++i) std::swap(lu_.block(0, i, 0), lu_.block(0, i, 1));
        }
        check_pivot(top[0], 0);
        const double m = top[1] / top[0];
        top[1] = m;
        for (std::size_t i = 0; i < br; ++i) lu_.block(0, i, 1) -= m * lu_.block(0, i, 0);
    }

    for (std::size_t k = 0; k < nb; ++k) {
        const std::size_t row0 = lu_.block_row_offset(k);

        // Row elimination with row pivoting on the block's own columns 1..br-1.
        for (std::size_t q = 0; q + 1 < br; ++q) {
            const std::size_t c = q + 1;
            std::size_t p = q;
            double best = std::abs(lu_.block(k, q, c));
            for (std::size_t i = q + 1; i < br; ++i) {
                const double v = std::abs(lu_.block(k, i, c));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            row_pivot_[k * (br - 1) + q] = p;
            if (p != q) {
                // Multipliers of earlier steps (columns 1..q) stay in place.
                std::swap(lu_.block(k, q, 0), lu_.block(k, p, 0));
                for (std::size_t j = c; j < bc; ++j) std::swap(lu_.block(k, q, j), lu_.block(k, p, j));
            }
            const double pivot = lu_.block(k, q, c);
            check_pivot(pivot, row0 + q);
            for (std::size_t i = q + 1; i < br; ++i) {
                const double l = lu_.block(k, i, c) / pivot;
                lu_.block(k, i, c) = l;
                lu_.block(k, i, 0) -= l * lu_.block(k, q, 0);
                for (std::size_t j = c + 1; j < bc; ++j) lu_.block(k, i, j) -= l * lu_.block(k, q, j);
            }
        }

        // Column elimination of the leftover row over the overlap pair.
        const bool last = k + 1 == nb;
        if (std::abs(lu_.block(k, lr, bc - 1)) > std::abs(lu_.block(k, lr, bc - 2))) {
            col_swap_[k + 1] = 1;
            for (std::size_t i = 0; i < br; ++i) std::swap(lu_.block(k, i, bc - 2), lu_.block(k, i, bc - 1));
            if (last) {
                std::swap(lu_.bottom_[0], lu_.bottom_[1]);
            } else {
                for (std::size_t i = 0; i < br; ++i) std::swap(lu_.block(k + 1, i, 0), lu_.block(k + 1, i, 1));
            }
        }
        const double pivot = lu_.block(k, lr, bc - 2);
        check_pivot(pivot, row0 + lr);
        const double m = lu_.block(k, lr, bc - 1) / pivot;
        lu_.block(k, lr, bc - 1) = m;
        for (std::size_t i = 0; i < lr; ++i) lu_.block(k, i, bc - 1) -= m * lu_.block(k, i, bc - 2);
        if (last) {
            lu_.bottom_[1] -= m * lu_.bottom_[0];
        } else {
            for (std::size_t i = 0; i < br; ++i) lu_.block(k + 1, i, 1) -= m * lu_.block(k + 1, i, 0);
        }
    }
    check_pivot(lu_.bottom_[1], lu_.order() - 1);
}

void AbdFactorization::solve(std::span<double> b) const {
    const std::size_t n = lu_.order();
    if (b.size() != n) throw Error(ErrorKind::Dimension, "ABD solve: right-hand side length != order");
    const std::size_t nb = lu_.blocks();
    const std::size_t br = lu_.block_rows();
    const std::size_t bc = lu_.block_cols();
    const std::size_t lr = br - 1;

    // Row operations, block by block.
    for (std::size_t k = 0; k < nb; ++k) {
        double* bk = b.data() + lu_.block_row_offset(k);
        for (std::size_t q = 0; q + 1 < br; ++q) {
            const std::size_t p = row_pivot_[k * (br - 1) + q];
            if (p != q) std::swap(bk[q], bk[p]);
            const double bq = bk[q];
            for (std::size_t i = q + 1; i < br; ++i) bk[i] -= lu_.block(k, i, q + 1) * bq;
        }
    }

    // Row i now pivots on unknown i, so the transformed unknowns overwrite b.
    // Forward pass: unknowns fixed by column-eliminated rows.
    b[0] /= lu_.top_[0];
    for (std::size_t k = 0; k < nb; ++k) {
        const std::size_t c0 = lu_.block_col_offset(k);
        const std::size_t i = c0 + br;
        b[i] = (b[i] - lu_.block(k, lr, 0) * b[c0]) / lu_.block(k, lr, bc - 2);
    }
    b[n - 1] = (b[n - 1] - lu_.bottom_[0] * b[n - 2]) / lu_.bottom_[1];

    // Backward pass: row-eliminated rows, last block first.
    for (std::size_t kk = nb; kk-- > 0;) {
        const std::size_t c0 = lu_.block_col_offset(kk);
        for (std::size_t q = br - 1; q-- > 0;) {
            const std::size_t i = c0 + q + 1;
            double s = b[i] - lu_.block(kk, q, 0) * b[c0];
            for (std::size_t j = q + 2; j < bc; ++j) s -= lu_.block(kk, q, j) * b[c0 + j];
            b[i] = s / lu_.block(kk, q, q + 1);
        }
    }

    // Undo the column transformations, last stage first.
    for (std::size_t kk = nb; kk-- > 0;) {
        const std::size_t c0 = lu_.block_col_offset(kk) + br;
        b[c0] -= lu_.block(kk, lr, bc - 1) * b[c0 + 1];
        if (col_swap_[kk + 1]) std::swap(b[c0], b[c0 + 1]);
    }
    b[0] -= lu_.top_[1] * b[1];
    if (col_swap_[0]) std::swap(b[0], b[1]);
}

void AbdFactorization::solve(std::span<double> rhs, std::size_t nrhs) const {
    const std::size_t n = order();
    if (rhs.size() != n * nrhs) throw Error(ErrorKind::Dimension, "ABD solve: right-hand side block size mismatch");
    for (std::size_t c = 0; c < nrhs; ++c) solve(rhs.subspan(c * n, n));
}

std::vector<double> AbdFactorization::apply(std::span<const double> x) const {
    const std::size_t n = lu_.order();
    if (x.size() != n) throw Error(ErrorKind::Dimension, "ABD apply: vector length != order");
    const std::size_t nb = lu_.blocks();
    const std::size_t br = lu_.block_rows();
    const std::size_t bc = lu_.block_cols();
    const std::size_t lr = br - 1;

    // z = C^{-1} x, stages in factorization order.
    std::vector<double> z(x.begin(), x.end());
    if (col_swap_[0]) std::swap(z[0], z[1]);
    z[0] += lu_.top_[1] * z[1];
    for (std::size_t k = 0; k < nb; ++k) {
        const std::size_t c0 = lu_.block_col_offset(k) + br;
        if (col_swap_[k + 1]) std::swap(z[c0], z[c0 + 1]);
        z[c0] += lu_.block(k, lr, bc - 1) * z[c0 + 1];
    }

    // w = (reduced matrix) z, skipping stored multipliers.
    std::vector<double> w(n, 0.0);
    w[0] = lu_.top_[0] * z[0];
    for (std::size_t k = 0; k < nb; ++k) {
        const std::size_t c0 = lu_.block_col_offset(k);
        const std::size_t r0 = lu_.block_row_offset(k);
        for (std::size_t q = 0; q < lr; ++q) {
            double acc = lu_.block(k, q, 0) * z[c0];
            for (std::size_t j = q + 1; j < bc; ++j) acc += lu_.block(k, q, j) * z[c0 + j];
            w[r0 + q] = acc;
        }
        w[r0 + lr] = lu_.block(k, lr, 0) * z[c0] + lu_.block(k, lr, bc - 2) * z[c0 + bc - 2];
    }
    w[n - 1] = lu_.bottom_[0] * z[n - 2] + lu_.bottom_[1] * z[n - 1];

    // Undo the row operations.
    for (std::size_t k = 0; k < nb; ++k) {
        double* wk = w.data() + lu_.block_row_offset(k);
        for (std::size_t q = br - 1; q-- > 0;) {
            for (std::size_t i = q + 1; i < br; ++i) wk[i] += lu_.block(k, i, q + 1) * wk[q];
            const std::size_t p = row_pivot_[k * (br - 1) + q];
            if (p != q) std::swap(wk[q], wk[p]);
        }
    }
    return w;
}

std::vector<double> AbdFactorization::reconstruct() const {
    const std::size_t n = order();
    std::vector<double> dense(n * n, 0.0);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const auto col = apply(e);
        for (std::size_t i = 0; i < n; ++i) dense[i * n + j] = col[i];
        e[j] = 0.0;
    }
    return dense;
}

AbdFactorization factorize(AbdMatrix matrix) { return AbdFactorization(std::move(matrix)); }

std::vector<double> solve(const AbdFactorization& factorization, std::span<const double> rhs) {
    std::vector<double> x(rhs.begin(), rhs.end());
    factorization.solve(x);
    return x;
}

}  // namespace osc
