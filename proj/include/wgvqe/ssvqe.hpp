#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wgvqe/circuit.hpp"
#include "wgvqe/pauli.hpp"
#include "wgvqe/rng.hpp"
#include "wgvqe/simulator.hpp"
#include "wgvqe/waveguide.hpp"

namespace wgvqe {

enum class EvaluatorKind { Exact, FixedShots, AdaptiveShots };

/// How the weighted cost is evaluated.
///   Exact          exact expectation values (density path under noise)
///   FixedShots     `shots` measurements of every (state, non-identity term) pair
///   AdaptiveShots  `shots` single-shot draws from the l1-weighted term distribution
struct Evaluator {
  EvaluatorKind kind = EvaluatorKind::Exact;
  int shots = 1024;

  static Evaluator exact() { return {EvaluatorKind::Exact, 0}; }
  static Evaluator fixed(int shots) { return {EvaluatorKind::FixedShots, shots}; }
  static Evaluator adaptive(int shots) { return {EvaluatorKind::AdaptiveShots, shots}; }
};

struct SsvqeConfig {
  std::vector<double> weights{2.0, 1.0};
  std::vector<std::uint64_t> basis{0, 1};
  double learning_rate = 0.1;
  int max_iterations = 1000;
  double convergence_tol = 1e-9;
  int plateau_iterations = 10;
  Evaluator evaluator;
  NoiseSpec noise;

  /// Strictly decreasing positive weights, one distinct basis index per
  /// weight (each < 2^n), shot count >= 1 for shot evaluators, valid noise.
  void validate(int n_qubits) const;
};

struct ShotPlanEntry {
  int state = 0;            ///< j
  int term = 0;             ///< i, index into PauliSum::terms()
  std::uint64_t basis = 0;  ///< input basis index of state j
  PauliString pauli;
  double c = 0.0;  ///< w_j * alpha_i
  double p = 0.0;  ///< |c| / l1
};

/// Importance-sampling plan over (state, term) pairs. Identity terms are
/// not sampled; their weighted total is the constant offset.
struct ShotPlan {
  std::vector<ShotPlanEntry> entries;
  double l1 = 0.0;
  double constant_offset = 0.0;
  std::vector<double> cumulative;
};

/// One plan entry per (j, i) with c = w_j alpha_i and p = |c| / ||c||_1.
/// `basis` defaults to 0..k. Throws on an empty sum.
ShotPlan build_shot_plan(const PauliSum& pauli, std::span<const double> weights,
                         std::span<const std::uint64_t> basis = {});

/// offset + l1 * mean over `budget` draws of sign(c) * (one-shot outcome).
double adaptive_estimate(const ShotPlan& plan, const Circuit& circuit, std::span<const double> params,
                         int budget, Rng& rng, const NoiseSpec& noise = {});

/// Exact <psi_j| U^dag H U |psi_j> for every configured input state.
std::vector<double> state_energies(const Circuit& circuit, std::span<const double> params,
                                   const PauliSum& pauli, std::span<const std::uint64_t> basis,
                                   const NoiseSpec& noise = {});

/// Sum_j w_j <psi_j| U^dag H U |psi_j> with the configured evaluator.
double weighted_cost(const Circuit& circuit, std::span<const double> params, const PauliSum& pauli,
                     const SsvqeConfig& cfg, Rng& rng);

/// g_k = [cost(theta_k + pi/2) - cost(theta_k - pi/2)] / 2.
std::vector<double> parameter_shift_gradient(const Circuit& circuit, std::span<const double> params,
                                             const PauliSum& pauli, const SsvqeConfig& cfg, Rng& rng);

/// Exact noise-free gradient of the weighted cost by reverse-mode sweep
/// through the circuit. Matches parameter_shift_gradient with Exact evaluation.
std::vector<double> adjoint_gradient(const Circuit& circuit, std::span<const double> params,
                                     const PauliSum& pauli, std::span<const double> weights,
                                     std::span<const std::uint64_t> basis);

struct TracePoint {
  int iteration = 0;
  double cost = 0.0;
  std::vector<double> energies;  ///< exact per-state energies, input order
};

struct SsvqeOutcome {
  std::vector<double> params;
  std::vector<TracePoint> trace;
  std::vector<double> energies;        ///< ascending
  std::vector<double> state_energies;  ///< input-state order
  double final_cost = 0.0;             ///< sum_j w_j state_energies[j]
  std::vector<StateVector> states;     ///< filled when noise is off
  std::vector<DensityMatrix> densities;  ///< filled when noise is on
  int iterations = 0;
  double wall_time_s = 0.0;
};

/// Uniform(-0.1, 0.1) starting point.
std::vector<double> initial_parameters(const Circuit& circuit, Rng& rng);

/// Adam until max_iterations or until
/// |delta cost| < tol for plateau_iterations consecutive iterations.
/// Exact noise-free runs use adjoint_gradient, everything else the
/// parameter-shift rule. When `initial` is empty the start point is drawn
/// with initial_parameters.
SsvqeOutcome optimize(const Circuit& circuit, const PauliSum& pauli, const SsvqeConfig& cfg, Rng& rng,
                      std::span<const double> initial = {});
SsvqeOutcome optimize(const Circuit& circuit, const WaveguideOperator& op, const SsvqeConfig& cfg,
                      Rng& rng, std::span<const double> initial = {});

}  // namespace wgvqe
