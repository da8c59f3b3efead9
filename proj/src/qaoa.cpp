#include "mlmc/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mlmc/error.hpp"
#include "mlmc/random.hpp"

namespace mlmc::qaoa {

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

DiagonalHamiltonian build_hamiltonian(const Subproblem& sp, std::size_t max_qubits) {
  const std::size_t k = sp.size();
  if (k > max_qubits) {
    throw CapacityError("QAOA simulator is capped at " + std::to_string(max_qubits) +
                        " qubits, subproblem has " + std::to_string(k));
  }
  DiagonalHamiltonian h;
  h.num_qubits = k;
  const std::size_t dim = std::size_t{1} << k;
  h.values.resize(dim);
  const auto edges = sp.internal.edges();
  for (std::size_t z = 0; z < dim; ++z) {
    double v = sp.constant;
    for (std::size_t i = 0; i < k; ++i) v += (z >> i) & 1U ? sp.bias0[i] : sp.bias1[i];
    for (const auto& e : edges) {
      if (((z >> e.u) ^ (z >> e.v)) & 1U) v += e.w;
    }
    h.values[z] = v;
  }
  return h;
}

Statevector evolve(const DiagonalHamiltonian& h, const Angles& angles, const LayerObserver& on_layer) {
  if (angles.gamma.size() != angles.beta.size() || angles.gamma.empty()) {
    throw ContractViolation("QAOA angles need equal, nonzero gamma and beta counts");
  }
  const std::size_t dim = h.values.size();
  Statevector s;
  s.amplitudes.assign(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  auto& amp = s.amplitudes;

  for (std::size_t layer = 0; layer < angles.layers(); ++layer) {
    const double gamma = angles.gamma[layer];
    for (std::size_t z = 0; z < dim; ++z) amp[z] *= std::polar(1.0, -gamma * h.values[z]);

    // exp(-i beta X) on every qubit: (a, b) -> (a cos - i b sin, b cos - i a sin).
    const double c = std::cos(angles.beta[layer]);
    const double sn = std::sin(angles.beta[layer]);
    for (std::size_t q = 0; q < h.num_qubits; ++q) {
      const std::size_t stride = std::size_t{1} << q;
      for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
          const Amplitude a = amp[i];
          const Amplitude b = amp[i + stride];
          amp[i] = {a.real() * c + b.imag() * sn, a.imag() * c - b.real() * sn};
          amp[i + stride] = {b.real() * c + a.imag() * sn, b.imag() * c - a.real() * sn};
        }
      }
    }
    if (on_layer) on_layer(layer + 1, s);
  }
  return s;
}

double expectation(const DiagonalHamiltonian& h, const Statevector& s) {
  if (h.values.size() != s.amplitudes.size()) throw ContractViolation("dimension mismatch");
  double e = 0.0;
  for (std::size_t z = 0; z < h.values.size(); ++z) e += h.values[z] * std::norm(s.amplitudes[z]);
  return e;
}

namespace {

Angles to_angles(const std::vector<double>& x, std::size_t layers) {
  Angles a;
  a.gamma.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(layers));
  a.beta.assign(x.begin() + static_cast<std::ptrdiff_t>(layers), x.end());
  return a;
}

}  // namespace

OptimizeResult optimize_angles(const DiagonalHamiltonian& h, int layers, std::uint64_t seed,
                               std::size_t evals_per_start, int starts,
                               std::span<const Angles> extra_starts) {
  if (layers < 1) throw ContractViolation("QAOA needs at least one layer");
  if (evals_per_start < 1) throw ContractViolation("evaluation budget must be >= 1");
  const auto p = static_cast<std::size_t>(layers);
  const std::size_t dim = 2 * p;

  Rng rng(seed);
  std::uniform_real_distribution<double> gamma_dist(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> beta_dist(0.0, std::numbers::pi);

  OptimizeResult best;
  best.expectation = -std::numeric_limits<double>::infinity();
  std::size_t used = 0;

  // Minimizes the negated expectation and tracks the best point ever seen.
  auto evaluate = [&](const std::vector<double>& x) {
    ++used;
    ++best.evaluations;
    Angles a = to_angles(x, p);
    double e = expectation(h, evolve(h, a));
    if (e > best.expectation) {
      best.expectation = e;
      best.angles = std::move(a);
    }
    return -e;
  };

  const std::size_t random_starts = static_cast<std::size_t>(std::max(1, starts));
  for (std::size_t start = 0; start < random_starts + extra_starts.size(); ++start) {
    used = 0;
    std::vector<double> x0(dim, 0.0);
    if (start < random_starts) {
      for (std::size_t j = 0; j < p; ++j) x0[j] = gamma_dist(rng);
      for (std::size_t j = p; j < dim; ++j) x0[j] = beta_dist(rng);
    } else {
      // Missing trailing layers stay at zero angles, which act as identity.
      const Angles& a = extra_starts[start - random_starts];
      for (std::size_t j = 0; j < std::min(p, a.layers()); ++j) {
        x0[j] = a.gamma[j];
        x0[p + j] = a.beta[j];
      }
    }

    std::vector<std::vector<double>> simplex{x0};
    std::vector<double> f{evaluate(x0)};
    for (std::size_t j = 0; j < dim && used < evals_per_start; ++j) {
      auto v = x0;
      v[j] += j < p ? 0.3 : 0.15;
      f.push_back(evaluate(v));
      simplex.push_back(std::move(v));
    }
    if (simplex.size() < dim + 1) continue;

    std::vector<std::size_t> idx(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    auto point = [&](double t, const std::vector<double>& from, std::vector<double>& out) {
      // out = centroid + t * (from - centroid)
      for (std::size_t c = 0; c < dim; ++c) out[c] = centroid[c] + t * (from[c] - centroid[c]);
    };

    while (used < evals_per_start) {
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
      const std::size_t lo = idx.front();
      const std::size_t hi = idx.back();
      const std::size_t second = idx[dim - 1];

      double spread = f[hi] - f[lo];
      double diameter = 0.0;
      for (const auto& v : simplex) {
        for (std::size_t c = 0; c < dim; ++c) diameter = std::max(diameter, std::abs(v[c] - simplex[lo][c]));
      }
      if (spread < 1e-12 && diameter < 1e-9) break;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t c = 0; c < dim; ++c) centroid[c] += simplex[idx[k]][c] / static_cast<double>(dim);
      }

      point(-1.0, simplex[hi], trial);
      const double fr = evaluate(trial);
      if (fr < f[lo]) {
        if (used >= evals_per_start) {
          simplex[hi] = trial;
          f[hi] = fr;
          break;
        }
        point(-2.0, simplex[hi], trial2);
        const double fe = evaluate(trial2);
        simplex[hi] = fe < fr ? trial2 : trial;
        f[hi] = std::min(fe, fr);
        continue;
      }
      if (fr < f[second]) {
        simplex[hi] = trial;
        f[hi] = fr;
        continue;
      }
      if (used >= evals_per_start) break;
      const bool outside = fr < f[hi];
      point(outside ? -0.5 : 0.5, simplex[hi], trial2);
      const double fc = evaluate(trial2);
      if (fc < std::min(fr, f[hi])) {
        simplex[hi] = trial2;
        f[hi] = fc;
        continue;
      }
      // Shrink toward the best vertex.
      for (std::size_t k = 1; k <= dim && used < evals_per_start; ++k) {
        auto& v = simplex[idx[k]];
        for (std::size_t c = 0; c < dim; ++c) v[c] = simplex[lo][c] + 0.5 * (v[c] - simplex[lo][c]);
        f[idx[k]] = evaluate(v);
      }
    }
  }
  return best;
}

SolverResult solve_qaoa(const SolverRequest& req, const Options& options) {
  const auto& sp = req.subproblem;
  if (req.warm_start.size() != sp.size()) {
    throw ContractViolation("warm start length does not match subproblem size");
  }
  const DiagonalHamiltonian h = build_hamiltonian(sp, options.max_qubits);
  const std::size_t evals = options.evals_per_start > 0
                                ? options.evals_per_start
                                : 200 * static_cast<std::size_t>(std::max(1, options.layers));
  auto opt = optimize_angles(h, options.layers, derive_seed(req.seed, {1}), evals, options.starts);
  const Statevector s = evolve(h, opt.angles);

  std::vector<double> cumulative(s.amplitudes.size());
  double total = 0.0;
  for (std::size_t z = 0; z < cumulative.size(); ++z) {
    total += std::norm(s.amplitudes[z]);
    cumulative[z] = total;
  }

  Rng rng(derive_seed(req.seed, {2}));
  std::uniform_real_distribution<double> u(0.0, total);
  std::size_t best_z = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t shot = 0; shot < options.shots; ++shot) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u(rng));
    auto z = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
    if (h.values[z] > best_value || (h.values[z] == best_value && z < best_z)) {
      best_value = h.values[z];
      best_z = z;
    }
  }

  SolverResult r{req.warm_start, subproblem_objective(sp, req.warm_start), "qaoa",
                 opt.evaluations + 1};
  if (options.shots > 0) {
    Bits y(sp.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<std::uint8_t>((best_z >> i) & 1U);
    const double obj = subproblem_objective(sp, y);
    if (obj > r.objective) {
      r.y = std::move(y);
      r.objective = obj;
    }
  }
  return r;
}

}  // namespace mlmc::qaoa
