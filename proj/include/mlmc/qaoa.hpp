#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mlmc/solvers.hpp"
#include "mlmc/subproblem.hpp"

namespace mlmc::qaoa {

/// Phase angles gamma and mixer angles beta, one pair per layer.
struct Angles {
  std::vector<double> gamma;
  std::vector<double> beta;

  std::size_t layers() const noexcept { return gamma.size(); }
};

using Amplitude = std::complex<double>;

/// Dense 2^K statevector. Bit i of a basis index is variable y_i.
struct Statevector {
  std::vector<Amplitude> amplitudes;

  double norm() const;
};

/// Problem Hamiltonian as its diagonal: values[z] = subproblem objective of z.
struct DiagonalHamiltonian {
  std::size_t num_qubits = 0;
  std::vector<double> values;
};

struct Options {
  int layers = 3;
  std::size_t shots = 1024;
  std::size_t max_qubits = 16;
  int starts = 10;
  /// Objective evaluations per start; 0 means 200 * layers.
  std::size_t evals_per_start = 0;
};

/// Throws CapacityError when the subproblem exceeds max_qubits.
DiagonalHamiltonian build_hamiltonian(const Subproblem& sp, std::size_t max_qubits = 16);

using LayerObserver = std::function<void(std::size_t layer, const Statevector&)>;

/// Prepares U(beta_p)U(gamma_p)...U(beta_1)U(gamma_1)|+>^K with
/// U(gamma) = exp(-i gamma H) and U(beta) = exp(-i beta sum_q X_q).
Statevector evolve(const DiagonalHamiltonian& h, const Angles& angles,
                   const LayerObserver& on_layer = {});

double expectation(const DiagonalHamiltonian& h, const Statevector& s);

struct OptimizeResult {
  Angles angles;
  double expectation = 0.0;
  std::uint64_t evaluations = 0;
};

/**
 * Nelder-Mead over the 2p angles, restarted from `starts` seeded random
 * points with gamma in [0, 2pi) and beta in [0, pi). Each start may spend
 * at most evals_per_start objective evaluations (the initial point counts
 * as one). Each entry of extra_starts adds one more start after the random
 * ones; angles with fewer layers are padded with zeros. Returns the best
 * angles seen over all starts.
 */
OptimizeResult optimize_angles(const DiagonalHamiltonian& h, int layers, std::uint64_t seed,
                               std::size_t evals_per_start, int starts = 10,
                               std::span<const Angles> extra_starts = {});

/// Build H, optimize the angles, sample `shots` bitstrings from the final
/// state and return the best sample, never worse than the warm start.
SolverResult solve_qaoa(const SolverRequest& req, const Options& options);

}  // namespace mlmc::qaoa
