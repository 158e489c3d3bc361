#pragma once

/// @file abd.hpp
/// @brief Almost-block-diagonal (ABD) matrices from 1-D collocation and their
/// factorization by alternate row and column elimination.
///
/// Layout of an order M = N*br + 2 matrix with N blocks of br rows:
///
///     row 0         : top row, columns 0..1
///     rows 1+k*br.. : block k, br rows x (br+2) columns starting at column k*br
///     row M-1       : bottom row, columns M-2..M-1
///
/// Consecutive blocks share two columns. For degree-r collocation br = r-1,
/// so each block is (r-1) x (r+1). The boundary rows of the collocation
/// systems only involve the two degrees of freedom pinned to the end
/// breakpoints, which is why they are stored over the two overlap columns.

#include <cstddef>
#include <span>
#include <vector>

namespace osc {

class AbdMatrix {
public:
    static constexpr std::size_t kOverlap = 2;

    /// @throws Error(Config) when blocks == 0 or block_rows == 0.
    AbdMatrix(std::size_t blocks, std::size_t block_rows);

    [[nodiscard]] std::size_t order() const noexcept { return blocks_ * block_rows_ + kOverlap; }
    [[nodiscard]] std::size_t blocks() const noexcept { return blocks_; }
    [[nodiscard]] std::size_t block_rows() const noexcept { return block_rows_; }
    [[nodiscard]] std::size_t block_cols() const noexcept { return block_rows_ + kOverlap; }
    [[nodiscard]] std::size_t block_col_offset(std::size_t k) const noexcept { return k * block_rows_; }
    [[nodiscard]] std::size_t block_row_offset(std::size_t k) const noexcept { return 1 + k * block_rows_; }

    /// Top row entries for columns 0 and 1.
    [[nodiscard]] std::span<double, 2> top() noexcept { return std::span<double, 2>(top_); }
    [[nodiscard]] std::span<const double, 2> top() const noexcept { return std::span<const double, 2>(top_); }
    /// Bottom row entries for columns M-2 and M-1.
    [[nodiscard]] std::span<double, 2> bottom() noexcept { return std::span<double, 2>(bottom_); }
    [[nodiscard]] std::span<const double, 2> bottom() const noexcept {
        return std::span<const double, 2>(bottom_);
    }

    /// Entry (i, j) of block k in local coordinates.
    [[nodiscard]] double& block(std::size_t k, std::size_t i, std::size_t j) noexcept {
        return blocks_data_[(k * block_rows_ + i) * block_cols() + j];
    }
    [[nodiscard]] double block(std::size_t k, std::size_t i, std::size_t j) const noexcept {
        return blocks_data_[(k * block_rows_ + i) * block_cols() + j];
    }
    /// Row i of block k (block_cols() entries).
    [[nodiscard]] std::span<double> block_row(std::size_t k, std::size_t i) noexcept {
        return {blocks_data_.data() + (k * block_rows_ + i) * block_cols(), block_cols()};
    }

    /// y = A x.
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    /// Row-major dense copy (order x order).
    [[nodiscard]] std::vector<double> to_dense() const;

    [[nodiscard]] double norm_inf() const;

private:
    friend class AbdFactorization;

    std::size_t blocks_;
    std::size_t block_rows_;
    double top_[2] = {0.0, 0.0};
    double bottom_[2] = {0.0, 0.0};
    std::vector<double> blocks_data_;
};

/// Alternate row/column elimination of an AbdMatrix. Row interchanges stay
/// inside a block, column interchanges stay inside an overlap pair, so all
/// fill remains in the original storage and the work is O(N br^3).
///
/// Immutable once constructed; concurrent solve() calls are safe.
class AbdFactorization {
public:
    /// Pivots with magnitude below this are treated as zero.
    static constexpr double kPivotFloor = 1e-300;

    /// @throws SingularMatrixError carrying the global row of the failing pivot.
    explicit AbdFactorization(AbdMatrix matrix);

    [[nodiscard]] std::size_t order() const noexcept { return lu_.order(); }

    /// Solves A x = b in place.
    /// @throws Error(Dimension) when rhs.size() != order().
    void solve(std::span<double> rhs) const;

    /// Solves for nrhs right-hand sides stored column-major with leading
    /// dimension order(). Each column goes through the same code path as
    /// the single-vector overload.
    void solve(std::span<double> rhs, std::size_t nrhs) const;

    /// y = A x recomputed from the stored factors.
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;

    /// Dense row-major A rebuilt from the factors.
    [[nodiscard]] std::vector<double> reconstruct() const;

private:
    void eliminate();
    void check_pivot(double pivot, std::size_t row) const;

    AbdMatrix lu_;
    // Row interchanges: row_pivot_[k * (br - 1) + q] is the local row swapped
    // with local row q at elimination step q of block k.
    std::vector<std::size_t> row_pivot_;
    // Column interchanges of each overlap pair: index 0 for the top stage,
    // k + 1 for the stage closing block k.
    std::vector<unsigned char> col_swap_;
};

[[nodiscard]] AbdFactorization factorize(AbdMatrix matrix);

/// Out-of-place single right-hand side solve.
[[nodiscard]] std::vector<double> solve(const AbdFactorization& factorization, std::span<const double> rhs);

}  // namespace osc
