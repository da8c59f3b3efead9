#include "mlmc/solver_registry.hpp"

#include "mlmc/error.hpp"

namespace mlmc {

namespace {

class ExactSolver final : public SubproblemSolver {
 public:
  std::string_view name() const override { return "exact"; }
  SolverResult solve(const SolverRequest& req) const override { return solve_exact(req); }
};

class TabuSolver final : public SubproblemSolver {
 public:
  std::string_view name() const override { return "tabu"; }
  SolverResult solve(const SolverRequest& req) const override { return solve_tabu(req); }
};

class QaoaSolver final : public SubproblemSolver {
 public:
  explicit QaoaSolver(qaoa::Options options) : options_(options) {}

  std::string_view name() const override { return "qaoa"; }

  SolverResult solve(const SolverRequest& req) const override {
    if (req.subproblem.size() > options_.max_qubits) return solve_tabu(req);
    return qaoa::solve_qaoa(req, options_);
  }

 private:
  qaoa::Options options_;
};

}  // namespace

std::vector<std::string> available_solvers() { return {"exact", "tabu", "qaoa"}; }

std::unique_ptr<SubproblemSolver> make_solver(std::string_view name, const qaoa::Options& qaoa_options) {
  if (name == "exact") return std::make_unique<ExactSolver>();
  if (name == "tabu") return std::make_unique<TabuSolver>();
  if (name == "qaoa") return std::make_unique<QaoaSolver>(qaoa_options);
  std::string list;
  for (const auto& s : available_solvers()) list += (list.empty() ? "" : ", ") + s;
  throw ConfigError("unknown solver '" + std::string(name) + "' (available: " + list + ")");
}

}  // namespace mlmc
