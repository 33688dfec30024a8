#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fogfed/rng.hpp"

namespace fogfed {

/// Normal latency or work profile: mean and standard deviation in the unit of
/// the caller (milliseconds for latencies, million instructions for work).
struct NormalSpec {
    double mean = 0.0;
    double std_dev = 0.0;
};

/// Discrete latency distribution on a fixed-width grid.
///
/// Bin k is centered at `origin + k * bin_width` milliseconds. Values are
/// immutable after construction; leading and trailing zero bins are trimmed
/// so `origin` is always the first bin that carries mass.
class LatencyPmf {
public:
    /// Validates the invariants (positive width, non-negative origin and mass,
    /// mass summing to one within 1e-9) and throws InvalidParameter otherwise.
    LatencyPmf(double bin_width, double origin, std::vector<double> mass);

    static LatencyPmf point(double at_ms, double bin_width = 1.0);

    double bin_width() const noexcept { return bin_width_; }
    double origin() const noexcept { return origin_; }
    std::span<const double> mass() const noexcept { return mass_; }
    std::size_t size() const noexcept { return mass_.size(); }

    double center(std::size_t k) const noexcept {
        return origin_ + static_cast<double>(k) * bin_width_;
    }
    double last_center() const noexcept { return center(mass_.size() - 1); }

    double mean() const;
    double variance() const;
    /// Total mass of bins whose center is <= t.
    double cdf(double t) const;
    /// Smallest bin center whose CDF is >= p.
    double quantile(double p) const;

private:
    double bin_width_;
    double origin_;
    std::vector<double> mass_;
};

struct CiInterval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.95;
};

/// Discretizes N(mean, std) onto bins aligned to multiples of `bin_width`,
/// truncated to [max(0, mean - truncation*std), mean + truncation*std].
LatencyPmf pmf_from_normal(const NormalSpec& spec, double bin_width = 1.0,
                           double truncation = 4.0);

LatencyPmf convolve(const LatencyPmf& a, const LatencyPmf& b);

/// Left fold of convolve; a single element is returned unchanged.
LatencyPmf convolve_chain(std::span<const LatencyPmf> parts);

/// P(D <= deadline).
double prob_on_time(const LatencyPmf& d, double deadline_ms);

CiInterval central_ci(const LatencyPmf& d, double level);

/// True iff the intervals do not touch. A shared endpoint is an overlap.
bool ci_disjoint(const CiInterval& a, const CiInterval& b);

/// Moves the distribution right by `offset_ms`, rounded to a whole bin.
LatencyPmf shift(const LatencyPmf& d, double offset_ms);

/// The offset `shift` actually applies: the nearest multiple of `bin_width`.
double snap_to_grid(double offset_ms, double bin_width);

double sample(const LatencyPmf& d, Rng& rng);

} // namespace fogfed
