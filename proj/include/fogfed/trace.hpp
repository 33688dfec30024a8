#pragma once

#include <iosfwd>

#include <json.hpp>

#include "fogfed/engine.hpp"
#include "fogfed/sweep.hpp"

namespace fogfed {

/// One JSON object per request: run identity, the partition plan with its
/// split decisions, and one allocation decision per partition.
nlohmann::json trace_record(const RunRow& run, const RequestTrace& t);

/// Writes every request trace of a run as JSON lines.
void write_trace(std::ostream& out, const RunRow& run, const RunResult& result);

} // namespace fogfed
