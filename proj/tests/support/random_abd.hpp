#pragma once

#include "osc/abd.hpp"

#include <cmath>
#include <random>

namespace osc::testing {

// Random ABD matrix whose rows are dominated by the entry on the global
// diagonal, so it is safely nonsingular.
inline AbdMatrix random_abd(std::size_t blocks, std::size_t block_rows, std::mt19937_64& rng,
                            bool dominant = true) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    AbdMatrix a(blocks, block_rows);
    const double boost = dominant ? 2.0 * static_cast<double>(block_rows + 2) : 0.0;
    a.top()[0] = dist(rng) + (dominant ? boost : 0.0);
    a.top()[1] = dist(rng);
    a.bottom()[0] = dist(rng);
    a.bottom()[1] = dist(rng) + (dominant ? boost : 0.0);
    for (std::size_t k = 0; k < blocks; ++k) {
        for (std::size_t i = 0; i < block_rows; ++i) {
            for (std::size_t j = 0; j < block_rows + 2; ++j) a.block(k, i, j) = dist(rng);
            a.block(k, i, i + 1) += boost;
        }
    }
    return a;
}

}  // namespace osc::testing
