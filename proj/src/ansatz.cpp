#include "wgvqe/ansatz.hpp"

#include <fmt/format.h>

#include "wgvqe/error.hpp"
#include "wgvqe/state.hpp"

namespace wgvqe {

ActionCatalog::ActionCatalog(int n_qubits) : n_(n_qubits) {
  check_qubit_count(n_qubits, "ActionCatalog");
  for (int q = 0; q < n_qubits; ++q) actions_.push_back(Gate::ry(q, -1));
  for (int q = 0; q + 1 < n_qubits; ++q) actions_.push_back(Gate::cnot(q, q + 1));
}

const Gate& ActionCatalog::at(int action) const {
  if (action < 0 || action >= size())
    throw InvalidArgument(fmt::format("action {} outside catalog of size {}", action, size()));
  return actions_[static_cast<std::size_t>(action)];
}

Circuit build_hea(int n_qubits, int layers) {
  if (layers < 1) throw InvalidArgument("build_hea: layers must be >= 1");
  Circuit c(n_qubits);
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n_qubits; ++q) c.add_ry(q);
    for (int q = 0; q + 1 < n_qubits; ++q) c.add_cnot(q, q + 1);
  }
  return c;
}

int default_hea_layers(int n_qubits) { return n_qubits <= 3 ? 6 : 15; }

int default_max_gates(int n_qubits) {
  return static_cast<int>(build_hea(n_qubits, default_hea_layers(n_qubits)).size());
}

Circuit apply_action(const Circuit& circuit, const ActionCatalog& catalog, int action, int max_gates) {
  if (catalog.n_qubits() != circuit.n_qubits())
    throw InvalidArgument("apply_action: catalog and circuit qubit counts differ");
  const Gate& g = catalog.at(action);
  if (circuit.size() >= static_cast<std::size_t>(max_gates))
    throw CircuitFull(fmt::format("circuit already holds {} gates", circuit.size()));
  Circuit out = circuit;
  if (g.kind == GateKind::RY)
    out.add_ry(g.qubit);
  else
    out.add_cnot(g.qubit, g.target);
  if (circuit.history()) {
    auto h = *circuit.history();
    h.push_back(action);
    out.set_history(std::move(h));
  } else if (circuit.empty()) {
    out.set_history(std::vector<int>{action});
  }
  return out;
}

void GrowingAnsatz::apply(const ActionCatalog& catalog, int action, int max_gates) {
  circuit = apply_action(circuit, catalog, action, max_gates);
  if (catalog.is_rotation(action)) params.push_back(0.0);
}

std::vector<double> encode_observation(const Circuit& circuit, double energy, int max_gates,
                                       const ActionCatalog& catalog, double energy_scale) {
  if (!circuit.history())
    throw InvalidArgument("encode_observation: circuit has no recorded action history");
  const auto& h = *circuit.history();
  if (h.size() > static_cast<std::size_t>(max_gates))
    throw InvalidArgument("encode_observation: history longer than max_gates");
  if (!(energy_scale > 0.0)) throw InvalidArgument("encode_observation: energy scale must be positive");
  const std::size_t na = static_cast<std::size_t>(catalog.size());
  std::vector<double> obs(static_cast<std::size_t>(max_gates) * na + 1, 0.0);
  for (std::size_t d = 0; d < h.size(); ++d) {
    catalog.at(h[d]);
    obs[d * na + static_cast<std::size_t>(h[d])] = 1.0;
  }
  obs.back() = energy / energy_scale;
  return obs;
}

Circuit circuit_from_history(int n_qubits, const std::vector<int>& history, int max_gates) {
  const ActionCatalog catalog(n_qubits);
  Circuit c(n_qubits);
  c.set_history(std::vector<int>{});
  for (int a : history) c = apply_action(c, catalog, a, max_gates);
  return c;
}

}  // namespace wgvqe
