#include "wgvqe/ssvqe.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "wgvqe/error.hpp"
#include "wgvqe/kernels.hpp"
#include "wgvqe/optim.hpp"

namespace wgvqe {

void SsvqeConfig::validate(int n_qubits) const {
  if (weights.empty()) throw InvalidArgument("SsvqeConfig: at least one weight is required");
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j]))
      throw InvalidArgument("SsvqeConfig: weights must be positive and finite");
    if (j > 0 && !(weights[j - 1] > weights[j]))
      throw InvalidArgument("SsvqeConfig: weights must be strictly decreasing");
  }
  if (basis.size() != weights.size())
    throw InvalidArgument("SsvqeConfig: need exactly one input basis state per weight");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (basis[a] >= dim) throw InvalidArgument("SsvqeConfig: basis index out of range");
    for (std::size_t b = a + 1; b < basis.size(); ++b)
      if (basis[a] == basis[b]) throw InvalidArgument("SsvqeConfig: input basis indices must be distinct");
  }
  if (!(learning_rate > 0.0)) throw InvalidArgument("SsvqeConfig: learning rate must be positive");
  if (max_iterations < 0) throw InvalidArgument("SsvqeConfig: max_iterations must be >= 0");
  if (plateau_iterations < 1) throw InvalidArgument("SsvqeConfig: plateau_iterations must be >= 1");
  if (evaluator.kind != EvaluatorKind::Exact && evaluator.shots < 1)
    throw InvalidArgument("SsvqeConfig: shot evaluators need at least one shot");
  noise.validate();
}

ShotPlan build_shot_plan(const PauliSum& pauli, std::span<const double> weights,
                         std::span<const std::uint64_t> basis) {
  if (pauli.empty()) throw InvalidArgument("build_shot_plan: empty PauliSum");
  if (weights.empty()) throw InvalidArgument("build_shot_plan: no weights");
  if (!basis.empty() && basis.size() != weights.size())
    throw InvalidArgument("build_shot_plan: basis/weight count mismatch");

  ShotPlan plan;
  const double identity = pauli.identity_coefficient();
  for (std::size_t j = 0; j < weights.size(); ++j) {
    plan.constant_offset += weights[j] * identity;
    for (std::size_t i = 0; i < pauli.terms().size(); ++i) {
      const PauliTerm& t = pauli.terms()[i];
      if (t.pauli.is_identity()) continue;
      ShotPlanEntry e;
      e.state = static_cast<int>(j);
      e.term = static_cast<int>(i);
      e.basis = basis.empty() ? j : basis[j];
      e.pauli = t.pauli;
      e.c = weights[j] * t.coeff;
      plan.entries.push_back(std::move(e));
      plan.l1 += std::abs(plan.entries.back().c);
    }
  }
  double acc = 0.0;
  for (ShotPlanEntry& e : plan.entries) {
    e.p = std::abs(e.c) / plan.l1;
    plan.cumulative.push_back(acc += e.p);
  }
  return plan;
}

namespace {

// Lazily prepared input states for one parameter point.
class PreparedStates {
 public:
  PreparedStates(const Circuit& c, std::span<const double> params, const NoiseSpec& noise)
      : circuit_(c), params_(params), noise_(noise) {}

  std::vector<double> distribution(std::uint64_t basis, const PauliString& p) {
    if (noise_.active()) return measurement_distribution(density(basis), p);
    return measurement_distribution(pure(basis), p);
  }

 private:
  const StateVector& pure(std::uint64_t basis) {
    for (auto& [b, s] : pure_)
      if (b == basis) return s;
    pure_.emplace_back(basis, run_statevector(circuit_, params_, basis));
    return pure_.back().second;
  }
  const DensityMatrix& density(std::uint64_t basis) {
    for (auto& [b, s] : mixed_)
      if (b == basis) return s;
    mixed_.emplace_back(basis, run_density(circuit_, params_, basis, noise_));
    return mixed_.back().second;
  }

  const Circuit& circuit_;
  std::span<const double> params_;
  NoiseSpec noise_;
  std::vector<std::pair<std::uint64_t, StateVector>> pure_;
  std::vector<std::pair<std::uint64_t, DensityMatrix>> mixed_;
};

}  // namespace

double adaptive_estimate(const ShotPlan& plan, const Circuit& circuit, std::span<const double> params,
                         int budget, Rng& rng, const NoiseSpec& noise) {
  if (budget < 1) throw InvalidArgument("adaptive_estimate: budget must be >= 1");
  noise.validate();
  if (plan.entries.empty()) return plan.constant_offset;

  PreparedStates states(circuit, params, noise);
  std::vector<std::optional<std::vector<double>>> cumulative(plan.entries.size());
  long long total = 0;
  for (int s = 0; s < budget; ++s) {
    const std::size_t k = sample_cumulative(plan.cumulative, rng);
    const ShotPlanEntry& e = plan.entries[k];
    auto& cum = cumulative[k];
    if (!cum) {
      cum = states.distribution(e.basis, e.pauli);
      std::partial_sum(cum->begin(), cum->end(), cum->begin());
    }
    const std::uint64_t outcome = sample_cumulative(*cum, rng);
    const int parity = (std::popcount(outcome & e.pauli.support_mask()) & 1) ? -1 : 1;
    total += e.c < 0.0 ? -parity : parity;
  }
  return plan.constant_offset + plan.l1 * static_cast<double>(total) / budget;
}

std::vector<double> state_energies(const Circuit& circuit, std::span<const double> params,
                                   const PauliSum& pauli, std::span<const std::uint64_t> basis,
                                   const NoiseSpec& noise) {
  if (circuit.n_qubits() != pauli.n_qubits())
    throw InvalidArgument("state_energies: circuit and Hamiltonian qubit counts differ");
  std::vector<double> out;
  out.reserve(basis.size());
  for (std::uint64_t b : basis) {
    if (noise.active())
      out.push_back(exact_expectation(pauli, run_density(circuit, params, b, noise)));
    else
      out.push_back(exact_expectation(pauli, run_statevector(circuit, params, b)));
  }
  return out;
}

namespace {

double fixed_shot_estimate(const Circuit& circuit, std::span<const double> params, const PauliSum& pauli,
                           const SsvqeConfig& cfg, Rng& rng) {
  PreparedStates states(circuit, params, cfg.noise);
  double total = 0.0;
  for (std::size_t j = 0; j < cfg.weights.size(); ++j) {
    for (const PauliTerm& t : pauli.terms()) {
      double value = 1.0;
      if (!t.pauli.is_identity()) {
        const auto probs = states.distribution(cfg.basis[j], t.pauli);
        value = sample_parity(probs, t.pauli.support_mask(), cfg.evaluator.shots, rng);
      }
      total += cfg.weights[j] * t.coeff * value;
    }
  }
  return total;
}

double weighted_cost_unchecked(const Circuit& circuit, std::span<const double> params,
                               const PauliSum& pauli, const SsvqeConfig& cfg, Rng& rng) {
  switch (cfg.evaluator.kind) {
    case EvaluatorKind::Exact: {
      const auto e = state_energies(circuit, params, pauli, cfg.basis, cfg.noise);
      double total = 0.0;
      for (std::size_t j = 0; j < e.size(); ++j) total += cfg.weights[j] * e[j];
      return total;
    }
    case EvaluatorKind::FixedShots:
      return fixed_shot_estimate(circuit, params, pauli, cfg, rng);
    case EvaluatorKind::AdaptiveShots: {
      const ShotPlan plan = build_shot_plan(pauli, cfg.weights, cfg.basis);
      return adaptive_estimate(plan, circuit, params, cfg.evaluator.shots, rng, cfg.noise);
    }
  }
  return 0.0;
}

void check_inputs(const Circuit& circuit, std::span<const double> params, const PauliSum& pauli,
                  const SsvqeConfig& cfg) {
  if (circuit.n_qubits() != pauli.n_qubits())
    throw InvalidArgument(fmt::format("circuit acts on {} qubits, Hamiltonian on {}", circuit.n_qubits(),
                                      pauli.n_qubits()));
  if (params.size() != static_cast<std::size_t>(circuit.n_params()))
    throw InvalidArgument(fmt::format("circuit expects {} parameters, got {}", circuit.n_params(), params.size()));
  cfg.validate(circuit.n_qubits());
}

}  // namespace

double weighted_cost(const Circuit& circuit, std::span<const double> params, const PauliSum& pauli,
                     const SsvqeConfig& cfg, Rng& rng) {
  check_inputs(circuit, params, pauli, cfg);
  return weighted_cost_unchecked(circuit, params, pauli, cfg, rng);
}

std::vector<double> parameter_shift_gradient(const Circuit& circuit, std::span<const double> params,
                                             const PauliSum& pauli, const SsvqeConfig& cfg, Rng& rng) {
  check_inputs(circuit, params, pauli, cfg);
  for (const Gate& g : circuit.gates())
    if (g.slot >= 0 && g.kind != GateKind::RY)
      throw InvalidArgument("parameter_shift_gradient: only RY gates may carry parameters");

  constexpr double kShift = std::numbers::pi / 2;
  std::vector<double> shifted(params.begin(), params.end());
  std::vector<double> grad(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    shifted[k] = params[k] + kShift;
    const double plus = weighted_cost_unchecked(circuit, shifted, pauli, cfg, rng);
    shifted[k] = params[k] - kShift;
    const double minus = weighted_cost_unchecked(circuit, shifted, pauli, cfg, rng);
    shifted[k] = params[k];
    grad[k] = 0.5 * (plus - minus);
  }
  return grad;
}

std::vector<double> adjoint_gradient(const Circuit& circuit, std::span<const double> params,
                                     const PauliSum& pauli, std::span<const double> weights,
                                     std::span<const std::uint64_t> basis) {
  if (circuit.n_qubits() != pauli.n_qubits())
    throw InvalidArgument("adjoint_gradient: circuit and Hamiltonian qubit counts differ");
  if (params.size() != static_cast<std::size_t>(circuit.n_params()))
    throw InvalidArgument("adjoint_gradient: parameter count mismatch");
  if (weights.size() != basis.size()) throw InvalidArgument("adjoint_gradient: basis/weight count mismatch");

  namespace kp = kernels::parallel;
  const int n = circuit.n_qubits();
  const auto bit = [n](int q) { return static_cast<unsigned>(n - 1 - q); };
  // dRY/dtheta = (-i/2) Y RY(theta)
  const kernels::Mat2 half_iy{0.0, -0.5, 0.5, 0.0};

  std::vector<double> grad(params.size(), 0.0);
  const auto gates = circuit.gates();
  for (std::size_t j = 0; j < basis.size(); ++j) {
    StateVector psi = run_statevector(circuit, params, basis[j]);
    std::vector<cplx> fwd(psi.amplitudes().begin(), psi.amplitudes().end());
    std::vector<cplx> phi(fwd.size(), cplx{});
    for (const PauliTerm& t : pauli.terms())
      kp::accumulate_pauli(fwd, phi, t.coeff, t.pauli.x_mask(), t.pauli.z_mask(), t.pauli.y_count());
    std::vector<cplx> tmp(fwd.size());

    for (auto g = gates.rbegin(); g != gates.rend(); ++g) {
      if (g->kind == GateKind::CNOT) {
        kp::apply_cnot(fwd, bit(g->qubit), bit(g->target));
        kp::apply_cnot(phi, bit(g->qubit), bit(g->target));
        continue;
      }
      if (g->kind != GateKind::RY) throw InvalidArgument("adjoint_gradient: unsupported gate");
      const auto slot = static_cast<std::size_t>(g->slot);
      std::ranges::copy(fwd, tmp.begin());
      kp::apply_1q(tmp, bit(g->qubit), half_iy);
      double overlap = 0.0;
      for (std::size_t i = 0; i < tmp.size(); ++i) overlap += (std::conj(phi[i]) * tmp[i]).real();
      grad[slot] += 2.0 * weights[j] * overlap;

      const double c = std::cos(0.5 * params[slot]);
      const double s = std::sin(0.5 * params[slot]);
      const kernels::Mat2 inv{c, s, -s, c};
      kp::apply_1q(fwd, bit(g->qubit), inv);
      kp::apply_1q(phi, bit(g->qubit), inv);
    }
  }
  return grad;
}

std::vector<double> initial_parameters(const Circuit& circuit, Rng& rng) {
  std::vector<double> p(static_cast<std::size_t>(circuit.n_params()));
  for (double& x : p) x = rng.uniform(-0.1, 0.1);
  return p;
}

SsvqeOutcome optimize(const Circuit& circuit, const PauliSum& pauli, const SsvqeConfig& cfg, Rng& rng,
                      std::span<const double> initial) {
  const auto t0 = std::chrono::steady_clock::now();
  SsvqeOutcome out;
  out.params = initial.empty() ? initial_parameters(circuit, rng)
                               : std::vector<double>(initial.begin(), initial.end());
  check_inputs(circuit, out.params, pauli, cfg);

  const bool exact = cfg.evaluator.kind == EvaluatorKind::Exact;
  const bool use_adjoint = exact && !cfg.noise.active();
  Adam adam(out.params.size(), AdamOptions{.learning_rate = cfg.learning_rate});

  const auto weighted = [&](const std::vector<double>& e) {
    double total = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j) total += cfg.weights[j] * e[j];
    return total;
  };

  int plateau = 0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    TracePoint tp;
    tp.iteration = it;
    tp.energies = state_energies(circuit, out.params, pauli, cfg.basis, cfg.noise);
    tp.cost = exact ? weighted(tp.energies) : weighted_cost_unchecked(circuit, out.params, pauli, cfg, rng);
    if (!std::isfinite(tp.cost)) throw DivergenceError("optimize: cost became non-finite");
    if (!out.trace.empty() && std::abs(tp.cost - out.trace.back().cost) < cfg.convergence_tol)
      ++plateau;
    else
      plateau = 0;
    out.trace.push_back(std::move(tp));
    if (plateau >= cfg.plateau_iterations || out.params.empty()) break;

    const auto grad = use_adjoint ? adjoint_gradient(circuit, out.params, pauli, cfg.weights, cfg.basis)
                                  : parameter_shift_gradient(circuit, out.params, pauli, cfg, rng);
    adam.step(out.params, grad);
    ++out.iterations;
  }

  out.state_energies = state_energies(circuit, out.params, pauli, cfg.basis, cfg.noise);
  out.final_cost = weighted(out.state_energies);
  out.energies = out.state_energies;
  std::ranges::sort(out.energies);
  for (std::uint64_t b : cfg.basis) {
    if (cfg.noise.active())
      out.densities.push_back(run_density(circuit, out.params, b, cfg.noise));
    else
      out.states.push_back(run_statevector(circuit, out.params, b));
  }
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

SsvqeOutcome optimize(const Circuit& circuit, const WaveguideOperator& op, const SsvqeConfig& cfg, Rng& rng,
                      std::span<const double> initial) {
  if (circuit.n_qubits() != op.n_qubits)
    throw InvalidArgument(fmt::format("optimize: circuit has {} qubits, operator {}", circuit.n_qubits(), op.n_qubits));
  return optimize(circuit, op.pauli, cfg, rng, initial);
}

}  // namespace wgvqe
