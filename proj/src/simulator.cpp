#include "wgvqe/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "wgvqe/error.hpp"
#include "wgvqe/kernels.hpp"

namespace wgvqe {

namespace {

using kernels::Mat2;

unsigned bit_of(int n, int qubit) { return static_cast<unsigned>(n - 1 - qubit); }

Mat2 ry_matrix(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  return {c, -s, s, c};
}

const Mat2 kHadamard{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2,
                     -std::numbers::sqrt2 / 2};
const Mat2 kSdg{1.0, 0.0, 0.0, cplx(0.0, -1.0)};

Mat2 single_qubit_matrix(const Gate& g, std::span<const double> params) {
  switch (g.kind) {
    case GateKind::RY:
      if (g.slot < 0 || static_cast<std::size_t>(g.slot) >= params.size())
        throw InvalidArgument(fmt::format("RY slot {} has no parameter", g.slot));
      return ry_matrix(params[static_cast<std::size_t>(g.slot)]);
    case GateKind::H: return kHadamard;
    case GateKind::SDG: return kSdg;
    case GateKind::CNOT: break;
  }
  throw InvalidArgument("single_qubit_matrix: CNOT is not a single-qubit gate");
}

void check_params(const Circuit& c, std::span<const double> params) {
  if (params.size() != static_cast<std::size_t>(c.n_params()))
    throw InvalidArgument(fmt::format("circuit expects {} parameters, got {}", c.n_params(), params.size()));
}

void check_gate_qubits(int n, const Gate& g) {
  if (g.qubit < 0 || g.qubit >= n || (g.kind == GateKind::CNOT && (g.target < 0 || g.target >= n)))
    throw InvalidArgument("apply_gate: qubit index out of range");
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidArgument(fmt::format("NoiseSpec: depolarizing strength {} outside [0, 1]", p));
}

void apply_gate(StateVector& state, const Gate& g, std::span<const double> params) {
  const int n = state.n_qubits();
  check_gate_qubits(n, g);
  if (g.kind == GateKind::CNOT)
    kernels::parallel::apply_cnot(state.amplitudes(), bit_of(n, g.qubit), bit_of(n, g.target));
  else
    kernels::parallel::apply_1q(state.amplitudes(), bit_of(n, g.qubit), single_qubit_matrix(g, params));
}

// rho is handled as a 2n-qubit vector with index (row << n) | col: the gate
// acts as U on the row bits and conj(U) on the column bits.
void apply_gate(DensityMatrix& rho, const Gate& g, std::span<const double> params) {
  const int n = rho.n_qubits();
  check_gate_qubits(n, g);
  const auto nn = static_cast<unsigned>(n);
  if (g.kind == GateKind::CNOT) {
    const unsigned c = bit_of(n, g.qubit);
    const unsigned t = bit_of(n, g.target);
    kernels::parallel::apply_cnot(rho.entries(), c + nn, t + nn);
    kernels::parallel::apply_cnot(rho.entries(), c, t);
  } else {
    const Mat2 u = single_qubit_matrix(g, params);
    const unsigned b = bit_of(n, g.qubit);
    kernels::parallel::apply_1q(rho.entries(), b + nn, u);
    kernels::parallel::apply_1q(rho.entries(), b, u.conj());
  }
}

StateVector run_statevector(const Circuit& circuit, std::span<const double> params,
                            std::uint64_t basis_index) {
  check_params(circuit, params);
  StateVector psi = StateVector::basis(circuit.n_qubits(), basis_index);
  for (const Gate& g : circuit.gates()) apply_gate(psi, g, params);
  return psi;
}

DensityMatrix run_density(const Circuit& circuit, std::span<const double> params,
                          std::uint64_t basis_index, const NoiseSpec& noise) {
  noise.validate();
  check_params(circuit, params);
  const int n = circuit.n_qubits();
  DensityMatrix rho = DensityMatrix::basis(n, basis_index);
  for (const Gate& g : circuit.gates()) {
    apply_gate(rho, g, params);
    if (noise.active()) {
      std::uint64_t mask = std::uint64_t{1} << bit_of(n, g.qubit);
      if (g.kind == GateKind::CNOT) mask |= std::uint64_t{1} << bit_of(n, g.target);
      kernels::parallel::depolarize(rho.entries(), rho.dim(), mask, noise.p);
    }
  }
  return rho;
}

namespace {

template <typename State>
State rotate_to_eigenbasis(State s, const PauliString& p) {
  for (int q = 0; q < p.n_qubits(); ++q) {
    switch (p.at(q)) {
      case Pauli::X: apply_gate(s, Gate::h(q), {}); break;
      case Pauli::Y:
        apply_gate(s, Gate::sdg(q), {});
        apply_gate(s, Gate::h(q), {});
        break;
      default: break;
    }
  }
  return s;
}

}  // namespace

std::vector<double> measurement_distribution(const StateVector& state, const PauliString& pauli) {
  if (pauli.n_qubits() != state.n_qubits()) throw InvalidArgument("measurement_distribution: qubit count mismatch");
  const StateVector rotated = rotate_to_eigenbasis(state, pauli);
  std::vector<double> probs(rotated.dim());
  std::ranges::transform(rotated.amplitudes(), probs.begin(), [](const cplx& a) { return std::norm(a); });
  return probs;
}

std::vector<double> measurement_distribution(const DensityMatrix& state, const PauliString& pauli) {
  if (pauli.n_qubits() != state.n_qubits()) throw InvalidArgument("measurement_distribution: qubit count mismatch");
  const DensityMatrix rotated = rotate_to_eigenbasis(state, pauli);
  std::vector<double> probs(rotated.dim());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::max(0.0, rotated(i, i).real());
  return probs;
}

std::size_t sample_cumulative(std::span<const double> cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::ranges::upper_bound(cumulative, u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

double sample_parity(std::span<const double> probs, std::uint64_t support_mask, int shots, Rng& rng) {
  if (shots < 1) throw InvalidArgument("sample_parity: shots must be >= 1");
  std::vector<double> cumulative(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) cumulative[i] = acc += probs[i];
  long long total = 0;
  for (int s = 0; s < shots; ++s) {
    const std::uint64_t outcome = sample_cumulative(cumulative, rng);
    total += (std::popcount(outcome & support_mask) & 1) ? -1 : 1;
  }
  return static_cast<double>(total) / shots;
}

double sample_pauli(const StateVector& state, const PauliString& pauli, int shots, Rng& rng) {
  if (shots < 1) throw InvalidArgument("sample_pauli: shots must be >= 1");
  if (pauli.is_identity()) return 1.0;
  return sample_parity(measurement_distribution(state, pauli), pauli.support_mask(), shots, rng);
}

double sample_pauli(const DensityMatrix& state, const PauliString& pauli, int shots, Rng& rng) {
  if (shots < 1) throw InvalidArgument("sample_pauli: shots must be >= 1");
  if (pauli.is_identity()) return 1.0;
  return sample_parity(measurement_distribution(state, pauli), pauli.support_mask(), shots, rng);
}

}  // namespace wgvqe
