#include "wgvqe/circuit.hpp"

#include <algorithm>
#include <string>

#include <fmt/format.h>

#include "wgvqe/error.hpp"
#include "wgvqe/state.hpp"

namespace wgvqe {

Circuit::Circuit(int n_qubits) : n_(n_qubits) { check_qubit_count(n_qubits, "Circuit"); }

void Circuit::check_qubit(int q) const {
  if (q < 0 || q >= n_)
    throw InvalidArgument(fmt::format("Circuit: qubit {} out of range for {} qubits", q, n_));
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(std::ranges::count(gates_, kind, &Gate::kind));
}

std::size_t Circuit::depth() const {
  std::vector<std::size_t> level(static_cast<std::size_t>(n_), 0);
  std::size_t depth = 0;
  for (const Gate& g : gates_) {
    auto& a = level[static_cast<std::size_t>(g.qubit)];
    if (g.kind == GateKind::CNOT) {
      auto& b = level[static_cast<std::size_t>(g.target)];
      a = b = std::max(a, b) + 1;
      depth = std::max(depth, a);
    } else {
      depth = std::max(depth, ++a);
    }
  }
  return depth;
}

int Circuit::add_ry(int qubit) {
  add(Gate::ry(qubit, n_params_));
  return n_params_ - 1;
}

void Circuit::add_cnot(int control, int target) { add(Gate::cnot(control, target)); }

void Circuit::add(const Gate& g) {
  switch (g.kind) {
    case GateKind::RY:
      check_qubit(g.qubit);
      if (g.slot != n_params_)
        throw InvalidArgument(fmt::format("Circuit: RY slot {} out of order, expected {}", g.slot, n_params_));
      ++n_params_;
      break;
    case GateKind::CNOT:
      check_qubit(g.qubit);
      check_qubit(g.target);
      if (g.qubit == g.target) throw InvalidArgument("Circuit: CNOT control equals target");
      break;
    case GateKind::H:
    case GateKind::SDG:
      throw InvalidArgument("Circuit: H/SDG are measurement basis changes, not ansatz gates");
  }
  gates_.push_back(g);
}

void to_json(nlohmann::json& j, const Circuit& c) {
  j = nlohmann::json::object();
  j["n_qubits"] = c.n_qubits();
  auto gates = nlohmann::json::array();
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::RY)
      gates.push_back({{"g", "RY"}, {"q", g.qubit}, {"slot", g.slot}});
    else
      gates.push_back({{"g", "CNOT"}, {"c", g.qubit}, {"t", g.target}});
  }
  j["gates"] = std::move(gates);
  if (c.history()) j["history"] = *c.history();
}

void from_json(const nlohmann::json& j, Circuit& c) {
  Circuit out(j.at("n_qubits").get<int>());
  for (const auto& g : j.at("gates")) {
    const auto kind = g.at("g").get<std::string>();
    if (kind == "RY")
      out.add(Gate::ry(g.at("q").get<int>(), g.at("slot").get<int>()));
    else if (kind == "CNOT")
      out.add(Gate::cnot(g.at("c").get<int>(), g.at("t").get<int>()));
    else
      throw InvalidArgument("Circuit JSON: unsupported gate \"" + kind + "\"");
  }
  if (j.contains("history")) out.set_history(j.at("history").get<std::vector<int>>());
  c = std::move(out);
}

}  // namespace wgvqe
