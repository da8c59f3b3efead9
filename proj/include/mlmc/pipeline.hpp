#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mlmc/coarsening.hpp"
#include "mlmc/graph.hpp"
#include "mlmc/qaoa.hpp"
#include "mlmc/solvers.hpp"

namespace mlmc {

struct RunConfig {
  NodeId subproblem_size = 100;
  int multistarts = 40;
  std::size_t dim = 3;
  int embed_sweeps = 30;
  double embed_tolerance = 1e-4;
  double sparsify_fraction = 0.0;
  std::string solver = "tabu";
  std::uint64_t seed = 0;
  double coarsest_budget = 5.0;
  double subproblem_budget = 0.1;
  int no_improve_limit = 3;
  qaoa::Options qaoa;

  /// Throws ConfigError on an unusable combination.
  void validate() const;

  bool operator==(const RunConfig& o) const;
};

/// Optional observers; called concurrently from multistart workers.
struct SolveHooks {
  /// Objective after every refinement iteration, index 0 = starting point.
  std::function<void(std::size_t level, int instance, const std::vector<double>& trace)> on_refine_trace;
  /// Every successful solver call: warm-start objective and returned objective.
  std::function<void(double warm, double result)> on_solver_call;
};

struct SolveOptions {
  /// Concurrent multistart instances; 0 uses the hardware concurrency.
  unsigned threads = 0;
  const SolveHooks* hooks = nullptr;
};

/// x_f[i] = x_c[F(i)], with the fine objective computed from scratch.
CutAssignment interpolate(const Graph& fine, const CutAssignment& coarse, const ContractionMap& map);

struct RefineResult {
  CutAssignment x;
  std::vector<double> trace;
  std::uint64_t iterations = 0;
  std::uint64_t solves = 0;
  std::uint64_t failures = 0;
  std::uint64_t contract_violations = 0;
  std::string last_failure;
};

/**
 * Randomized subproblem refinement of one level.
 *
 * Each iteration draws a uniform subset of min(|V|, ceil(max(0.2|V|, 2K)))
 * nodes, keeps its K highest-gain members (ties: smaller id), solves the
 * pinned subproblem warm-started from x and takes the result (solvers never
 * return worse than the warm start). A strict improvement resets the
 * no-improvement counter; anything else, including a failed solve,
 * increments it. Stops when the counter reaches cfg.no_improve_limit.
 */
RefineResult refine_level(const Graph& g, const CutAssignment& x0, const RunConfig& cfg,
                          const SubproblemSolver& solver, std::uint64_t instance_seed,
                          const std::function<void(double, double)>& on_solver_call = {});

struct MultistartResult {
  RefineResult best;
  int best_instance = -1;
  std::vector<double> instance_objectives;
  std::uint64_t total_solves = 0;
  std::uint64_t total_failures = 0;
};

/// Seed of multistart instance r at level k.
std::uint64_t instance_seed(std::uint64_t master, std::size_t level, int instance);

/// Runs cfg.multistarts independent refine_level instances from x0 and keeps
/// the best (ties: lowest instance index). Independent of thread count.
MultistartResult multistart_refine(const Graph& g, const CutAssignment& x0, const RunConfig& cfg,
                                   const SubproblemSolver& solver, std::size_t level,
                                   const SolveOptions& options = {});

struct LevelReport {
  std::size_t level = 0;
  NodeId nodes = 0;
  std::size_t edges = 0;
  double avg_degree = 0.0;
  double density = 0.0;
  double total_weight = 0.0;
  /// Intra-pair weight dropped contracting this level into the next one.
  double lost_weight = 0.0;
  std::size_t sparsified_edges = 0;
  double coarse_objective = 0.0;
  double refined_objective = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t subproblem_solves = 0;
  std::uint64_t solver_failures = 0;
};

struct RunReport {
  double best_objective = 0.0;
  Bits best_assignment;
  double coarsest_objective = 0.0;
  /// coarsest objective / final objective; empty when the final cut is 0.
  std::optional<double> coarse_ratio;
  bool coarsened = false;
  std::string coarsest_solver;
  /// Index 0 is the input graph.
  std::vector<LevelReport> per_level;
  double wall_time = 0.0;
  RunConfig config;
  std::size_t threads = 1;
};

/// Full multilevel solve: coarsen, solve the coarsest level, then
/// interpolate and multistart-refine every finer level.
RunReport solve(const Graph& g, const RunConfig& cfg, const SolveOptions& options = {});

/// Hierarchy options implied by a run config.
HierarchyOptions hierarchy_options(const RunConfig& cfg);

}  // namespace mlmc
