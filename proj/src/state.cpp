#include "wgvqe/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wgvqe/error.hpp"

namespace wgvqe {

void check_qubit_count(int n, const char* where) {
  if (n < 1 || n > kMaxQubits)
    throw InvalidArgument(std::string(where) + ": qubit count must be in [1, 12], got " +
                          std::to_string(n));
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  check_qubit_count(n_qubits, "StateVector::basis");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw InvalidArgument("StateVector::basis: index out of range");
  StateVector s;
  s.n_ = n_qubits;
  s.amps_.assign(dim, cplx{});
  s.amps_[index] = 1.0;
  return s;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(n_qubits, "StateVector");
  if (amps_.size() != (std::size_t{1} << n_qubits))
    throw InvalidArgument("StateVector: amplitude count must be 2^n");
  if (std::abs(norm() - 1.0) > 1e-10) throw InvalidArgument("StateVector: state is not normalized");
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cplx& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

DensityMatrix DensityMatrix::basis(int n_qubits, std::uint64_t index) {
  check_qubit_count(n_qubits, "DensityMatrix::basis");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw InvalidArgument("DensityMatrix::basis: index out of range");
  DensityMatrix d;
  d.n_ = n_qubits;
  d.rho_.assign(dim * dim, cplx{});
  d.rho_[index * dim + index] = 1.0;
  return d;
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  DensityMatrix d;
  d.n_ = psi.n_qubits();
  const std::size_t dim = psi.dim();
  const auto a = psi.amplitudes();
  d.rho_.resize(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) d.rho_[i * dim + j] = a[i] * std::conj(a[j]);
  return d;
}

DensityMatrix::DensityMatrix(int n_qubits, std::vector<cplx> entries)
    : n_(n_qubits), rho_(std::move(entries)) {
  check_qubit_count(n_qubits, "DensityMatrix");
  if (rho_.size() != dim() * dim()) throw InvalidArgument("DensityMatrix: entry count must be 4^n");
  if (hermitian_defect() > 1e-10) throw InvalidArgument("DensityMatrix: not Hermitian");
  if (std::abs(trace() - cplx(1.0)) > 1e-10) throw InvalidArgument("DensityMatrix: trace is not 1");
}

cplx DensityMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < dim(); ++i) t += rho_[i * dim() + i];
  return t;
}

double DensityMatrix::hermitian_defect() const { return wgvqe::hermitian_defect(to_matrix()); }

double DensityMatrix::min_eigenvalue() const {
  // Real embedding [[A, -B], [B, A]] of A + iB has the same spectrum, doubled.
  const std::size_t d = dim();
  RMatrix emb(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const cplx h = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
      emb(i, j) = h.real();
      emb(i + d, j + d) = h.real();
      emb(i, j + d) = -h.imag();
      emb(i + d, j) = h.imag();
    }
  return jacobi_eigensolve(emb).front().value;
}

CMatrix DensityMatrix::to_matrix() const {
  CMatrix m(dim(), dim());
  std::ranges::copy(rho_, m.data().begin());
  return m;
}

}  // namespace wgvqe
