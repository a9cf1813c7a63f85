#pragma once

#include <vector>

#include "wgvqe/circuit.hpp"

namespace wgvqe {

/// Gate placements available to the architecture search: RY on each qubit,
/// then CNOT(i, i+1) for each adjacent pair. N_A = 2n - 1.
class ActionCatalog {
 public:
  explicit ActionCatalog(int n_qubits);

  int n_qubits() const noexcept { return n_; }
  int size() const noexcept { return static_cast<int>(actions_.size()); }
  /// Gate for an action; RY entries carry slot -1 (assigned on placement).
  const Gate& at(int action) const;
  bool is_rotation(int action) const { return at(action).kind == GateKind::RY; }

 private:
  int n_;
  std::vector<Gate> actions_;
};

/// `layers` repetitions of [RY on every qubit, CNOT(i, i+1) chain].
Circuit build_hea(int n_qubits, int layers);

/// Default search depth cap: gate count of the baseline HEA
/// (6 layers for <= 3 qubits, 15 layers otherwise).
int default_max_gates(int n_qubits);
int default_hea_layers(int n_qubits);

/// Appends the catalog gate. Throws CircuitFull when the circuit already
/// holds max_gates gates. Histories are extended when present (or when the
/// circuit is empty).
Circuit apply_action(const Circuit& circuit, const ActionCatalog& catalog, int action, int max_gates);

/// Circuit plus its parameter vector; new RY angles start at 0.
struct GrowingAnsatz {
  Circuit circuit;
  std::vector<double> params;

  explicit GrowingAnsatz(int n_qubits) : circuit(n_qubits) { circuit.set_history(std::vector<int>{}); }
  void apply(const ActionCatalog& catalog, int action, int max_gates);
};

/// Flattened one-hot matrix of shape max_gates x N_A followed by
/// energy / energy_scale. Requires the circuit's action history.
std::vector<double> encode_observation(const Circuit& circuit, double energy, int max_gates,
                                       const ActionCatalog& catalog, double energy_scale = 1.0);

/// Rebuilds a circuit from an action history.
Circuit circuit_from_history(int n_qubits, const std::vector<int>& history, int max_gates);

}  // namespace wgvqe
