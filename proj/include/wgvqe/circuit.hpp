#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

namespace wgvqe {

enum class GateKind { RY, CNOT, H, SDG };

struct Gate {
  GateKind kind = GateKind::RY;
  int qubit = 0;   ///< RY/H/SDG target, CNOT control
  int target = -1; ///< CNOT target
  int slot = -1;   ///< RY parameter slot

  static Gate ry(int qubit, int slot) { return {GateKind::RY, qubit, -1, slot}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, control, target, -1}; }
  static Gate h(int qubit) { return {GateKind::H, qubit, -1, -1}; }
  static Gate sdg(int qubit) { return {GateKind::SDG, qubit, -1, -1}; }

  bool operator==(const Gate&) const = default;
};

/// Ansatz body made of RY and CNOT gates.
///
/// RY slots are assigned 0, 1, 2, ... in order of appearance. H and SDG are
/// measurement basis changes and are rejected here. Circuits grown through
/// apply_action() also carry their action history.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits);

  int n_qubits() const noexcept { return n_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }
  int n_params() const noexcept { return n_params_; }
  std::size_t count(GateKind kind) const;
  /// Layered depth: gates on disjoint qubits share a layer.
  std::size_t depth() const;

  /// Appends RY on `qubit` using the next free slot; returns the slot.
  int add_ry(int qubit);
  void add_cnot(int control, int target);
  /// Appends a validated gate. RY gates must carry slot == n_params().
  void add(const Gate& gate);

  const std::optional<std::vector<int>>& history() const noexcept { return history_; }
  void set_history(std::optional<std::vector<int>> history) { history_ = std::move(history); }

  bool operator==(const Circuit&) const = default;

 private:
  void check_qubit(int q) const;

  int n_ = 0;
  int n_params_ = 0;
  std::vector<Gate> gates_;
  std::optional<std::vector<int>> history_;
};

/// {"n_qubits":3, "gates":[{"g":"RY","q":0,"slot":0},{"g":"CNOT","c":0,"t":1}], "history":[...]}
void to_json(nlohmann::json& j, const Circuit& c);
void from_json(const nlohmann::json& j, Circuit& c);

}  // namespace wgvqe
