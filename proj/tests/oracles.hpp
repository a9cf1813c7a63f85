#pragma once

// Independent reference implementations used only by the tests. They build
// full 2^n x 2^n matrices with Kronecker products and never touch the
// bit-twiddling kernels of the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "wgvqe/circuit.hpp"
#include "wgvqe/linalg.hpp"
#include "wgvqe/rng.hpp"

namespace oracle {

using wgvqe::CMatrix;
using wgvqe::cplx;

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

inline CMatrix pauli(char c) {
  const cplx i(0, 1);
  switch (c) {
    case 'X': return mat2(0, 1, 1, 0);
    case 'Y': return mat2(0, -i, i, 0);
    case 'Z': return mat2(1, 0, 0, -1);
    default: return mat2(1, 0, 0, 1);
  }
}

/// Letter k is the leftmost Kronecker factor for k = 0.
inline CMatrix string_matrix(const std::string& letters) {
  CMatrix m = CMatrix::identity(1);
  for (char c : letters) m = kron(m, pauli(c));
  return m;
}

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline CMatrix dagger(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline cplx trace(const CMatrix& a) {
  cplx t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

inline std::vector<std::string> all_strings(int n) {
  std::vector<std::string> out{""};
  for (int q = 0; q < n; ++q) {
    std::vector<std::string> next;
    for (const auto& s : out)
      for (char c : std::string("IXYZ")) next.push_back(s + c);
    out = std::move(next);
  }
  return out;
}

/// Coefficient of every string as tr(P M) / 2^n by dense products.
inline std::vector<std::pair<std::string, cplx>> dense_decomposition(const CMatrix& m, int n) {
  std::vector<std::pair<std::string, cplx>> out;
  const double dim = static_cast<double>(m.rows());
  for (const auto& s : all_strings(n)) out.emplace_back(s, trace(matmul(string_matrix(s), m)) / dim);
  return out;
}

inline CMatrix single_qubit_full(int n, int qubit, const CMatrix& u) {
  CMatrix m = CMatrix::identity(1);
  for (int q = 0; q < n; ++q) m = kron(m, q == qubit ? u : CMatrix::identity(2));
  return m;
}

inline CMatrix cnot_full(int n, int control, int target) {
  const CMatrix p0 = mat2(1, 0, 0, 0);
  const CMatrix p1 = mat2(0, 0, 0, 1);
  CMatrix a = CMatrix::identity(1);
  CMatrix b = CMatrix::identity(1);
  for (int q = 0; q < n; ++q) {
    a = kron(a, q == control ? p0 : CMatrix::identity(2));
    b = kron(b, q == control ? p1 : (q == target ? pauli('X') : CMatrix::identity(2)));
  }
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

inline CMatrix ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return mat2(c, -s, s, c);
}

inline CMatrix gate_full(int n, const wgvqe::Gate& g, const std::vector<double>& params) {
  using wgvqe::GateKind;
  switch (g.kind) {
    case GateKind::RY: return single_qubit_full(n, g.qubit, ry(params.at(static_cast<std::size_t>(g.slot))));
    case GateKind::CNOT: return cnot_full(n, g.qubit, g.target);
    case GateKind::H: {
      const double r = 1 / std::sqrt(2.0);
      return single_qubit_full(n, g.qubit, mat2(r, r, r, -r));
    }
    case GateKind::SDG: return single_qubit_full(n, g.qubit, mat2(1, 0, 0, cplx(0, -1)));
  }
  return {};
}

inline CMatrix circuit_unitary(const wgvqe::Circuit& c, const std::vector<double>& params) {
  const int n = c.n_qubits();
  CMatrix u = CMatrix::identity(std::size_t{1} << n);
  for (const auto& g : c.gates()) u = matmul(gate_full(n, g, params), u);
  return u;
}

inline std::vector<cplx> run(const wgvqe::Circuit& c, const std::vector<double>& params, std::size_t basis) {
  const CMatrix u = circuit_unitary(c, params);
  std::vector<cplx> out(u.rows());
  for (std::size_t i = 0; i < u.rows(); ++i) out[i] = u(i, basis);
  return out;
}

/// (1-p) rho + p / 4^k sum_P P rho P^dag over Pauli strings on `qubits`,
/// which equals (1-p) rho + p (I/2^k) (x) tr_qubits(rho).
inline CMatrix depolarize(const CMatrix& rho, int n, const std::vector<int>& qubits, double p) {
  CMatrix acc(rho.rows(), rho.cols());
  const auto k = static_cast<int>(qubits.size());
  for (const auto& sub : all_strings(k)) {
    std::string full(static_cast<std::size_t>(n), 'I');
    for (int t = 0; t < k; ++t) full[static_cast<std::size_t>(qubits[static_cast<std::size_t>(t)])] = sub[static_cast<std::size_t>(t)];
    const CMatrix pm = string_matrix(full);
    const CMatrix term = matmul(matmul(pm, rho), dagger(pm));
    for (std::size_t i = 0; i < acc.rows(); ++i)
      for (std::size_t j = 0; j < acc.cols(); ++j) acc(i, j) += term(i, j);
  }
  const double scale = p / std::pow(4.0, k);
  CMatrix out(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < rho.rows(); ++i)
    for (std::size_t j = 0; j < rho.cols(); ++j) out(i, j) = (1 - p) * rho(i, j) + scale * acc(i, j);
  return out;
}

inline CMatrix run_density(const wgvqe::Circuit& c, const std::vector<double>& params, std::size_t basis, double p) {
  const int n = c.n_qubits();
  const std::size_t dim = std::size_t{1} << n;
  CMatrix rho(dim, dim);
  rho(basis, basis) = 1;
  for (const auto& g : c.gates()) {
    const CMatrix u = gate_full(n, g, params);
    rho = matmul(matmul(u, rho), dagger(u));
    std::vector<int> qs{g.qubit};
    if (g.kind == wgvqe::GateKind::CNOT) qs.push_back(g.target);
    rho = depolarize(rho, n, qs, p);
  }
  return rho;
}

inline CMatrix random_hermitian(int n, wgvqe::Rng& rng) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < dim; ++j) {
      m(i, j) = cplx(rng.normal(), rng.normal());
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline std::vector<cplx> random_state(int n, wgvqe::Rng& rng) {
  std::vector<cplx> v(std::size_t{1} << n);
  double norm = 0;
  for (auto& a : v) {
    a = cplx(rng.normal(), rng.normal());
    norm += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(norm);
  return v;
}

/// Random RY/CNOT circuit and a matching parameter vector.
inline std::pair<wgvqe::Circuit, std::vector<double>> random_circuit(int n, int gates, wgvqe::Rng& rng) {
  wgvqe::Circuit c(n);
  std::vector<double> params;
  for (int g = 0; g < gates; ++g) {
    if (n > 1 && rng.uniform() < 0.4) {
      const int a = static_cast<int>(rng.below(static_cast<std::size_t>(n)));
      int b = static_cast<int>(rng.below(static_cast<std::size_t>(n - 1)));
      if (b >= a) ++b;
      c.add_cnot(a, b);
    } else {
      c.add_ry(static_cast<int>(rng.below(static_cast<std::size_t>(n))));
      params.push_back(rng.uniform(-3.0, 3.0));
    }
  }
  return {c, params};
}

inline double max_diff(const std::vector<cplx>& a, std::span<const cplx> b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Quadratic form psi^dag M psi.
inline cplx quadratic_form(const CMatrix& m, std::span<const cplx> psi) {
  cplx acc{};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) acc += std::conj(psi[i]) * m(i, j) * psi[j];
  return acc;
}

}  // namespace oracle
