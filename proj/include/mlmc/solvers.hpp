#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mlmc/subproblem.hpp"

namespace mlmc {

/**
 * Work budget for one solve.
 *
 * Solvers run a deterministic number of steps so that results depend only
 * on the request and seed, never on machine load. When max_steps is zero
 * the step count is derived from `seconds` through a fixed throughput
 * estimate (see tabu_steps_for).
 */
struct Budget {
  double seconds = 0.1;
  std::uint64_t max_steps = 0;
};

struct SolverRequest {
  const Subproblem& subproblem;
  Bits warm_start;
  Budget budget;
  std::uint64_t seed = 0;
};

struct SolverResult {
  Bits y;
  /// Subproblem objective of y, constant included.
  double objective = 0.0;
  std::string solver_name;
  std::uint64_t evaluations = 0;
};

/// Largest subproblem solve_exact accepts.
inline constexpr std::size_t kExactMaxVariables = 22;

/// Global optimum by exhaustive Gray-code enumeration; ties go to the
/// smallest sum_i y_i 2^i. Throws CapacityError above kExactMaxVariables.
SolverResult solve_exact(const SolverRequest& req);

/**
 * One-flip tabu search from the warm start.
 *
 * Each step flips the best admissible variable by gain (ties: smallest
 * index). A flipped variable stays tabu for max(5, K/10) steps unless the
 * flip would produce a new best (aspiration). After 50*K steps without a
 * new best the walk restarts from a seeded random assignment; the
 * incumbent is kept. Returns the best assignment visited.
 */
SolverResult solve_tabu(const SolverRequest& req);

/// Deterministic step count used for a time budget on this subproblem.
std::uint64_t tabu_steps_for(double seconds, const Subproblem& sp);

class SubproblemSolver {
 public:
  virtual ~SubproblemSolver() = default;
  virtual std::string_view name() const = 0;
  virtual SolverResult solve(const SolverRequest& req) const = 0;
};

/// Runs the solver and enforces the solver contract: the reported
/// objective must match a recomputation within 1e-9 and must not fall
/// below the warm start's objective. Throws SolverContractError otherwise.
SolverResult solve_checked(const SubproblemSolver& solver, const SolverRequest& req);

}  // namespace mlmc
