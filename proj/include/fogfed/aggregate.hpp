#pragma once

#include <cstddef>
#include <span>

namespace fogfed {

/// Sample mean with a normal-approximation 95% CI half-width, 1.96 * s / sqrt(n),
/// where s is the unbiased sample standard deviation.
struct CellStats {
    std::size_t n = 0;
    double mean = 0.0;
    double half_width = 0.0;
};

/// Throws MissingData when fewer than two values are given.
CellStats mean_ci(std::span<const double> values);

} // namespace fogfed
