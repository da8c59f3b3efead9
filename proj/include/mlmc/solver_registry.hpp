#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mlmc/qaoa.hpp"
#include "mlmc/solvers.hpp"

namespace mlmc {

/// Names accepted by make_solver, in display order.
std::vector<std::string> available_solvers();

/// "exact", "tabu" or "qaoa". Unknown names throw ConfigError listing the
/// available solvers. The qaoa solver falls back to tabu for subproblems
/// above its qubit cap.
std::unique_ptr<SubproblemSolver> make_solver(std::string_view name,
                                              const qaoa::Options& qaoa_options = {});

}  // namespace mlmc
