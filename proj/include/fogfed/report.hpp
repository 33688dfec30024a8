#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fogfed/aggregate.hpp"
#include "fogfed/sweep.hpp"

namespace fogfed {

inline constexpr const char* kCsvHeader =
    "scenario,method,requests,mix,degree,seed,meet_rate,avg_makespan_ms";

/// Header plus one fixed-precision line per row.
void write_csv(std::ostream& out, const std::vector<RunRow>& rows);

/// Throws Parse naming the 1-based line for a bad header or row.
std::vector<RunRow> read_csv(std::istream& in);

struct CellKey {
    std::string scenario;
    std::size_t requests = 0;
    double mix = 0.0;
    int degree = 0;

    auto operator<=>(const CellKey&) const = default;
};

struct CellSummary {
    CellKey cell;
    std::string method;
    CellStats meet_rate;
    CellStats makespan_ms;
};

/// Paired difference a - b over runs that share a seed.
struct DeltaSummary {
    CellKey cell;
    std::string method_a;
    std::string method_b;
    CellStats meet_rate;
    CellStats makespan_ms;
};

/// Cells in first-appearance order; methods in first-appearance order within a cell.
/// Throws MissingData for a cell with fewer than two runs.
std::vector<CellSummary> summarize(const std::vector<RunRow>& rows);

/// Every ordered method pair (a before b in appearance order) of every cell.
std::vector<DeltaSummary> paired_deltas(const std::vector<RunRow>& rows);

std::string format_report(const std::vector<CellSummary>& cells,
                          const std::vector<DeltaSummary>& deltas);

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells,
                       const std::vector<DeltaSummary>& deltas);

} // namespace fogfed
