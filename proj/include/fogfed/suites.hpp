#pragma once

#include <string>
#include <vector>

#include "fogfed/scenario.hpp"

namespace fogfed {

/// Names of the built-in experiment suites, in listing order.
const std::vector<std::string>& suite_names();

/// Throws Config for an unknown name.
Scenario builtin_suite(const std::string& name);

/// Human-readable listing: one block per suite with its sweep axes.
std::string describe_suites();

} // namespace fogfed
