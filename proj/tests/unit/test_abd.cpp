#include "osc/abd.hpp"
#include "osc/error.hpp"

#include "dense_lu.hpp"
#include "random_abd.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using osc::AbdFactorization;
using osc::AbdMatrix;
using osc::testing::dense_solve;
using osc::testing::max_abs;
using osc::testing::random_abd;

AbdMatrix identity(std::size_t blocks, std::size_t br) {
    AbdMatrix a(blocks, br);
    a.top()[0] = 1.0;
    a.bottom()[1] = 1.0;
    for (std::size_t k = 0; k < blocks; ++k) {
        for (std::size_t i = 0; i < br; ++i) a.block(k, i, i + 1) = 1.0;
    }
    return a;
}

TEST(Abd, LayoutGeometry) {
    const AbdMatrix a(4, 3);
    EXPECT_EQ(a.order(), 14u);
    EXPECT_EQ(a.block_cols(), 5u);
    EXPECT_EQ(a.block_col_offset(2), 6u);
    EXPECT_EQ(a.block_row_offset(2), 7u);
}

TEST(Abd, IdentitySolve) {
    const AbdFactorization f(identity(5, 4));
    std::vector<double> b(f.order());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = 0.5 * i - 3.0;
    auto x = b;
    f.solve(x);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_DOUBLE_EQ(x[i], b[i]);
}

TEST(Abd, ReconstructionMatchesOriginal) {
    std::mt19937_64 rng(1);
    const auto a = random_abd(3, 2, rng);
    const AbdFactorization f(a);
    const auto dense = a.to_dense();
    const auto rebuilt = f.reconstruct();
    double diff = 0.0;
    for (std::size_t i = 0; i < dense.size(); ++i) diff = std::max(diff, std::abs(dense[i] - rebuilt[i]));
    EXPECT_LE(diff / a.norm_inf(), 1e-12);
}

TEST(Abd, ApplyMatchesMultiply) {
    std::mt19937_64 rng(2);
    const auto a = random_abd(6, 4, rng, false);
    const AbdFactorization f(a);
    std::vector<double> x(a.order());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(0.3 * i);
    const auto y1 = a.multiply(x);
    const auto y2 = f.apply(x);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y1[i], y2[i], 1e-12 * a.norm_inf());
}

TEST(Abd, OnesRecovered) {
    std::mt19937_64 rng(3);
    const auto a = random_abd(8, 5, rng);
    std::vector<double> ones(a.order(), 1.0);
    auto b = a.multiply(ones);
    osc::factorize(a).solve(b);
    for (double v : b) EXPECT_NEAR(v, 1.0, 1e-11);
}

TEST(Abd, MatchesDenseOracleWithoutDominance) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_abd(1 + trial % 8, 2 + trial % 5, rng, false);
        std::vector<double> b(a.order());
        for (double& v : b) v = u(rng);
        const auto ref = dense_solve(a.to_dense(), b);
        const auto x = osc::solve(AbdFactorization(a), b);
        std::vector<double> diff(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - ref[i];
        EXPECT_LE(max_abs(diff) / max_abs(ref), 1e-8) << "trial " << trial;
    }
}

TEST(Abd, ResidualBound) {
    std::mt19937_64 rng(5);
    const auto a = random_abd(10, 3, rng);
    std::vector<double> b(a.order());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sin(1.0 + i);
    const auto x = osc::solve(osc::factorize(a), b);
    const auto ax = a.multiply(x);
    std::vector<double> r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = ax[i] - b[i];
    EXPECT_LE(max_abs(r) / (a.norm_inf() * max_abs(x) + max_abs(b)), 1e-10);
}

TEST(Abd, MultipleRightHandSidesBitwise) {
    std::mt19937_64 rng(6);
    const auto a = random_abd(6, 3, rng);
    const AbdFactorization f(a);
    const std::size_t m = f.order();
    const std::size_t nrhs = 64;
    std::vector<double> block(m * nrhs);
    for (std::size_t i = 0; i < block.size(); ++i) block[i] = std::sin(0.1 * i);
    auto single = block;
    f.solve(block, nrhs);
    for (std::size_t c = 0; c < nrhs; ++c) {
        f.solve(std::span<double>(single.data() + c * m, m));
    }
    EXPECT_EQ(block, single);
}

TEST(Abd, SingularReportsRow) {
    AbdMatrix a = identity(3, 2);
    for (std::size_t j = 0; j < a.block_cols(); ++j) a.block(1, 0, j) = 0.0;
    try {
        const AbdFactorization f(a);
        FAIL() << "expected singular matrix error";
    } catch (const osc::SingularMatrixError& e) {
        EXPECT_EQ(e.kind(), osc::ErrorKind::SingularMatrix);
        EXPECT_LT(e.row(), a.order());
    }
}

TEST(Abd, DimensionMismatch) {
    const AbdFactorization f(identity(2, 2));
    std::vector<double> b(f.order() + 1);
    EXPECT_THROW(f.solve(b), osc::Error);
}

TEST(Abd, Deterministic) {
    std::mt19937_64 rng(8);
    const auto a = random_abd(7, 4, rng);
    std::vector<double> b(a.order(), 0.25);
    const auto x1 = osc::solve(AbdFactorization(a), b);
    const auto x2 = osc::solve(AbdFactorization(a), b);
    EXPECT_EQ(x1, x2);
}

}  // namespace
