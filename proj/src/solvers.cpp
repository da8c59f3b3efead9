#include "mlmc/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "mlmc/error.hpp"
#include "mlmc/random.hpp"

namespace mlmc {

namespace {

// Rough single-core throughput of the tabu inner loop in "work units"
// (one unit ~ one gain comparison or one neighbor update).
constexpr double kTabuWorkPerSecond = 1.0e9;

void check_request(const SolverRequest& req) {
  if (req.warm_start.size() != req.subproblem.size()) {
    throw ContractViolation("warm start length does not match subproblem size");
  }
  if (!(req.budget.seconds > 0.0) && req.budget.max_steps == 0) {
    throw ContractViolation("solver budget must be positive");
  }
}

// Flip variable i, keeping obj and gains consistent. Works for the bias part
// too: the bias contribution to gain[i] just changes sign.
void flip(const Graph& internal, Bits& y, std::vector<double>& gains, double& obj, std::size_t i) {
  obj += gains[i];
  gains[i] = -gains[i];
  const auto yi = y[i];
  // Sign from arithmetic, not a branch: neighbor parts are close to random.
  for (const auto& nb : internal.neighbors(static_cast<NodeId>(i))) {
    const double sign = static_cast<double>(2 * (y[nb.node] ^ yi)) - 1.0;
    gains[nb.node] += 2.0 * sign * nb.weight;
  }
  y[i] = static_cast<std::uint8_t>(yi ^ 1U);
}

SolverResult finish(const SolverRequest& req, Bits best, std::string name, std::uint64_t evals) {
  const auto& sp = req.subproblem;
  double obj = subproblem_objective(sp, best);
  double warm = subproblem_objective(sp, req.warm_start);
  if (warm > obj) {
    best = req.warm_start;
    obj = warm;
  }
  return {std::move(best), obj, std::move(name), evals};
}

}  // namespace

SolverResult solve_exact(const SolverRequest& req) {
  check_request(req);
  const auto& sp = req.subproblem;
  const std::size_t k = sp.size();
  if (k > kExactMaxVariables) {
    throw CapacityError("exact solver handles at most " + std::to_string(kExactMaxVariables) +
                        " variables, got " + std::to_string(k) + "; use a heuristic solver");
  }

  Bits y(k, 0);
  double obj = subproblem_objective(sp, y);
  auto gains = subproblem_gains(sp, y);
  std::uint64_t code = 0;
  double best_obj = obj;
  std::uint64_t best_code = 0;

  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t t = 1; t < total; ++t) {
    const auto b = static_cast<std::size_t>(std::countr_zero(t));
    flip(sp.internal, y, gains, obj, b);
    code ^= std::uint64_t{1} << b;
    if (obj > best_obj || (obj == best_obj && code < best_code)) {
      best_obj = obj;
      best_code = code;
    }
  }

  Bits best(k);
  for (std::size_t i = 0; i < k; ++i) best[i] = static_cast<std::uint8_t>((best_code >> i) & 1U);
  return finish(req, std::move(best), "exact", total);
}

std::uint64_t tabu_steps_for(double seconds, const Subproblem& sp) {
  const double k = static_cast<double>(sp.size());
  const double avg_degree =
      sp.size() == 0 ? 0.0 : 2.0 * static_cast<double>(sp.internal.num_edges()) / k;
  const double per_step = k + avg_degree + 16.0;
  const double steps = std::ceil(seconds * kTabuWorkPerSecond / per_step);
  return static_cast<std::uint64_t>(std::max(1.0, steps));
}

SolverResult solve_tabu(const SolverRequest& req) {
  check_request(req);
  const auto& sp = req.subproblem;
  const std::size_t k = sp.size();
  const std::uint64_t steps =
      req.budget.max_steps > 0 ? req.budget.max_steps : tabu_steps_for(req.budget.seconds, sp);
  const std::uint64_t tenure = std::max<std::uint64_t>(5, k / 10);
  const std::uint64_t restart_after = 50 * static_cast<std::uint64_t>(k);

  Rng rng(req.seed);
  Bits y = req.warm_start;
  double obj = subproblem_objective(sp, y);
  auto gains = subproblem_gains(sp, y);
  Bits best = y;
  double best_obj = obj;
  std::vector<std::uint64_t> tabu_until(k, 0);
  std::uint64_t stale = 0;
  std::uint64_t evaluations = 0;

  for (std::uint64_t step = 0; step < steps; ++step) {
    std::size_t pick = k;
    double pick_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      if (gains[i] <= pick_gain) continue;
      if (tabu_until[i] > step && !(obj + gains[i] > best_obj)) continue;
      pick = i;
      pick_gain = gains[i];
    }

    if (pick < k) {
      flip(sp.internal, y, gains, obj, pick);
      tabu_until[pick] = step + 1 + tenure;
      ++evaluations;
      if (obj > best_obj) {
        best_obj = obj;
        best = y;
        stale = 0;
        continue;
      }
    }
    if (++stale >= restart_after) {
      std::bernoulli_distribution coin(0.5);
      for (auto& b : y) b = coin(rng) ? 1 : 0;
      obj = subproblem_objective(sp, y);
      gains = subproblem_gains(sp, y);
      std::fill(tabu_until.begin(), tabu_until.end(), 0);
      stale = 0;
      if (obj > best_obj) {
        best_obj = obj;
        best = y;
      }
    }
  }
  return finish(req, std::move(best), "tabu", evaluations);
}

SolverResult solve_checked(const SubproblemSolver& solver, const SolverRequest& req) {
  SolverResult r = solver.solve(req);
  const auto& sp = req.subproblem;
  if (r.y.size() != sp.size()) {
    throw SolverContractError(std::string(solver.name()) + ": result has wrong length");
  }
  const double recomputed = subproblem_objective(sp, r.y);
  if (std::abs(recomputed - r.objective) > 1e-9 * std::max(1.0, std::abs(recomputed))) {
    throw SolverContractError(std::string(solver.name()) + ": reported objective " +
                              std::to_string(r.objective) + " != recomputed " +
                              std::to_string(recomputed));
  }
  const double warm = subproblem_objective(sp, req.warm_start);
  if (recomputed < warm) {
    throw SolverContractError(std::string(solver.name()) + ": result " + std::to_string(recomputed) +
                              " is worse than warm start " + std::to_string(warm));
  }
  r.objective = recomputed;
  return r;
}

}  // namespace mlmc
