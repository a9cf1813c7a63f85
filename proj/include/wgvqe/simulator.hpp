#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wgvqe/circuit.hpp"
#include "wgvqe/pauli.hpp"
#include "wgvqe/rng.hpp"
#include "wgvqe/state.hpp"

namespace wgvqe {

/// Depolarizing noise applied after every ansatz gate on that gate's qubits.
struct NoiseSpec {
  double p = 0.0;
  bool enabled = false;

  static NoiseSpec none() { return {}; }
  static NoiseSpec depolarizing(double p) { return {p, true}; }
  bool active() const noexcept { return enabled && p > 0.0; }
  /// Throws InvalidArgument unless 0 <= p <= 1.
  void validate() const;
};

/// Applies one gate (any kind, including the H/SDG basis changes) in place.
void apply_gate(StateVector& state, const Gate& gate, std::span<const double> params);
void apply_gate(DensityMatrix& rho, const Gate& gate, std::span<const double> params);

/// U(params)|basis_index>.
StateVector run_statevector(const Circuit& circuit, std::span<const double> params,
                            std::uint64_t basis_index);

/// Noisy evolution of |basis_index><basis_index|. After each gate the
/// depolarizing channel acts on the gate's qubits (1 for RY, 2 for CNOT).
DensityMatrix run_density(const Circuit& circuit, std::span<const double> params,
                          std::uint64_t basis_index, const NoiseSpec& noise);

/// Outcome probabilities in the eigenbasis of `pauli` (after H / SDG.H
/// basis changes on its support).
std::vector<double> measurement_distribution(const StateVector& state, const PauliString& pauli);
std::vector<double> measurement_distribution(const DensityMatrix& state, const PauliString& pauli);

/// Mean of `shots` parity outcomes (+1/-1) drawn from `probs`, with parity
/// taken over `support_mask`.
double sample_parity(std::span<const double> probs, std::uint64_t support_mask, int shots, Rng& rng);

/// Shot estimate of <pauli>. Identity strings return +1 without sampling.
double sample_pauli(const StateVector& state, const PauliString& pauli, int shots, Rng& rng);
double sample_pauli(const DensityMatrix& state, const PauliString& pauli, int shots, Rng& rng);

/// Draws one index from a cumulative distribution (last entry ~1).
std::size_t sample_cumulative(std::span<const double> cumulative, Rng& rng);

}  // namespace wgvqe
