#pragma once

#include <json.hpp>

#include "fogfed/model.hpp"

namespace fogfed {

/// Reads `{vertices:[{id,name,app,work:{mean_mi,std_mi},output_mb,pinned}],
/// edges:[{from,to}]}`. Edge data is the source vertex's output size.
/// Throws Config on missing fields or unknown vertex ids, and on any
/// validate_dag violation.
WorkflowSpec workflow_from_json(const nlohmann::json& doc);

nlohmann::json workflow_to_json(const WorkflowSpec& w);

} // namespace fogfed
