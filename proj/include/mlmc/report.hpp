#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlmc/pipeline.hpp"

namespace mlmc {

nlohmann::json config_to_json(const RunConfig& cfg);

/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);

/**
 * Report layout:
 *   objective, assignment (explicit 0/1 array), coarse_ratio (null when the
 *   final cut is 0), coarsest_objective, coarsened, coarsest_solver,
 *   per_level[], wall_time, config{...}, seed
 */
nlohmann::json report_to_json(const RunReport& report);

/// Two columns per line: "<label> <part>".
void write_partition(std::ostream& out, std::span<const std::uint8_t> x,
                     const std::vector<std::string>& labels);

}  // namespace mlmc
