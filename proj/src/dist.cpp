#include "fogfed/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fogfed/error.hpp"

namespace fogfed {

namespace {

constexpr double kMassTolerance = 1e-9;
// Quantile and CDF comparisons absorb accumulated rounding in cumulative sums.
constexpr double kCdfSlack = 1e-12;

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

bool same_width(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(a, b);
}

void require_same_width(const LatencyPmf& a, const LatencyPmf& b) {
    if (!same_width(a.bin_width(), b.bin_width())) {
        throw Error(ErrorCode::IncompatibleDistributions,
                    "bin widths differ: " + std::to_string(a.bin_width()) + " vs " +
                        std::to_string(b.bin_width()));
    }
}

} // namespace

LatencyPmf::LatencyPmf(double bin_width, double origin, std::vector<double> mass)
    : bin_width_(bin_width), origin_(origin), mass_(std::move(mass)) {
    if (!(bin_width_ > 0.0) || !std::isfinite(bin_width_)) {
        throw Error(ErrorCode::InvalidParameter, "bin_width must be positive");
    }
    if (!(origin_ >= 0.0) || !std::isfinite(origin_)) {
        throw Error(ErrorCode::InvalidParameter, "origin must be non-negative");
    }
    double total = 0.0;
    for (double m : mass_) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw Error(ErrorCode::InvalidParameter, "mass entries must be non-negative");
        }
        total += m;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
        throw Error(ErrorCode::InvalidParameter,
                    "mass sums to " + std::to_string(total) + ", expected 1");
    }
    auto first = std::find_if(mass_.begin(), mass_.end(), [](double m) { return m > 0.0; });
    auto lead = static_cast<std::size_t>(first - mass_.begin());
    while (!mass_.empty() && mass_.back() == 0.0) {
        mass_.pop_back();
    }
    if (lead > 0) {
        mass_.erase(mass_.begin(), mass_.begin() + static_cast<std::ptrdiff_t>(lead));
        origin_ += static_cast<double>(lead) * bin_width_;
    }
}

LatencyPmf LatencyPmf::point(double at_ms, double bin_width) {
    return LatencyPmf(bin_width, at_ms, {1.0});
}

double LatencyPmf::mean() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < mass_.size(); ++k) {
        acc += mass_[k] * static_cast<double>(k);
    }
    return origin_ + acc * bin_width_;
}

double LatencyPmf::variance() const {
    const double mu = mean();
    double acc = 0.0;
    for (std::size_t k = 0; k < mass_.size(); ++k) {
        const double d = center(k) - mu;
        acc += mass_[k] * d * d;
    }
    return acc;
}

double LatencyPmf::cdf(double t) const {
    const double pos = (t - origin_) / bin_width_;
    if (pos < -1e-9) {
        return 0.0;
    }
    const auto last = static_cast<std::size_t>(std::floor(pos + 1e-9));
    if (last + 1 >= mass_.size()) {
        return 1.0;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k <= last; ++k) {
        acc += mass_[k];
    }
    return std::min(acc, 1.0);
}

double LatencyPmf::quantile(double p) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < mass_.size(); ++k) {
        acc += mass_[k];
        if (acc >= p - kCdfSlack) {
            return center(k);
        }
    }
    return last_center();
}

LatencyPmf pmf_from_normal(const NormalSpec& spec, double bin_width, double truncation) {
    if (!(spec.mean > 0.0) || !(bin_width > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "normal mean and bin_width must be positive");
    }
    if (!(spec.std_dev >= 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "std_dev must be non-negative");
    }
    if (!(truncation >= 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "truncation must be at least one sigma");
    }
    const double half = 0.5 * bin_width;
    if (spec.std_dev == 0.0) {
        return LatencyPmf::point(std::round(spec.mean / bin_width) * bin_width, bin_width);
    }
    const double lo = std::max(0.0, spec.mean - truncation * spec.std_dev);
    const double hi = spec.mean + truncation * spec.std_dev;
    const auto first = static_cast<long>(std::round(lo / bin_width));
    const auto last = static_cast<long>(std::round(hi / bin_width));

    std::vector<double> mass;
    mass.reserve(static_cast<std::size_t>(last - first + 1));
    for (long k = first; k <= last; ++k) {
        const double c = static_cast<double>(k) * bin_width;
        // Clip each bin to the truncation window so the tails beyond it are
        // dropped before renormalizing.
        const double left = std::max(c - half, lo);
        const double right = std::min(c + half, hi);
        const double p = right > left ? normal_cdf(right, spec.mean, spec.std_dev) -
                                            normal_cdf(left, spec.mean, spec.std_dev)
                                      : 0.0;
        mass.push_back(std::max(p, 0.0));
    }
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (!(total > 0.0)) {
        return LatencyPmf::point(std::round(spec.mean / bin_width) * bin_width, bin_width);
    }
    for (double& m : mass) {
        m /= total;
    }
    return LatencyPmf(bin_width, static_cast<double>(first) * bin_width, std::move(mass));
}

LatencyPmf convolve(const LatencyPmf& a, const LatencyPmf& b) {
    require_same_width(a, b);
    const auto am = a.mass();
    const auto bm = b.mass();
    std::vector<double> out(am.size() + bm.size() - 1, 0.0);
    for (std::size_t i = 0; i < am.size(); ++i) {
        const double ai = am[i];
        if (ai == 0.0) {
            continue;
        }
        double* dst = out.data() + i;
        for (std::size_t j = 0; j < bm.size(); ++j) {
            dst[j] += ai * bm[j];
        }
    }
    return LatencyPmf(a.bin_width(), a.origin() + b.origin(), std::move(out));
}

LatencyPmf convolve_chain(std::span<const LatencyPmf> parts) {
    if (parts.empty()) {
        throw Error(ErrorCode::InvalidArgument, "convolve_chain needs at least one distribution");
    }
    LatencyPmf acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        acc = convolve(acc, parts[i]);
    }
    return acc;
}

double prob_on_time(const LatencyPmf& d, double deadline_ms) {
    return d.cdf(deadline_ms);
}

CiInterval central_ci(const LatencyPmf& d, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "confidence level must be in (0,1)");
    }
    const double tail = 0.5 * (1.0 - level);
    return CiInterval{d.quantile(tail), d.quantile(1.0 - tail), level};
}

bool ci_disjoint(const CiInterval& a, const CiInterval& b) {
    if (std::abs(a.level - b.level) > 1e-12) {
        throw Error(ErrorCode::InvalidComparison, "confidence levels differ");
    }
    return a.hi < b.lo || b.hi < a.lo;
}

LatencyPmf shift(const LatencyPmf& d, double offset_ms) {
    if (!(offset_ms >= 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "shift offset must be non-negative");
    }
    const double snapped = snap_to_grid(offset_ms, d.bin_width());
    if (snapped == 0.0) {
        return d;
    }
    std::vector<double> mass(d.mass().begin(), d.mass().end());
    return LatencyPmf(d.bin_width(), d.origin() + snapped, std::move(mass));
}

double snap_to_grid(double offset_ms, double bin_width) {
    return std::round(offset_ms / bin_width) * bin_width;
}

double sample(const LatencyPmf& d, Rng& rng) {
    const double u = rng.uniform01();
    const auto m = d.mass();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
        acc += m[k];
        if (u < acc) {
            return d.center(k);
        }
    }
    return d.last_center();
}

} // namespace fogfed
