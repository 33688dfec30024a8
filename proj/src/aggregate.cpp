#include "fogfed/aggregate.hpp"

#include <cmath>

#include "fogfed/error.hpp"

namespace fogfed {

CellStats mean_ci(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error(ErrorCode::MissingData, "a cell needs at least two runs, got " +
                                                std::to_string(values.size()));
    }
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    return CellStats{values.size(), mean, 1.96 * sd / std::sqrt(n)};
}

} // namespace fogfed
