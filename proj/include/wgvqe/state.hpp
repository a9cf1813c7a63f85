#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wgvqe/linalg.hpp"

namespace wgvqe {

/// Maximum register size supported anywhere in the library.
inline constexpr int kMaxQubits = 12;

/// Throws InvalidArgument unless 1 <= n <= kMaxQubits.
void check_qubit_count(int n, const char* where);

/// Pure state on n qubits. Qubit 0 is the most significant bit of the
/// basis-state index.
class StateVector {
 public:
  /// Computational basis state |index>.
  static StateVector basis(int n_qubits, std::uint64_t index);
  /// Takes ownership of amplitudes; requires length 2^n and unit norm within 1e-10.
  StateVector(int n_qubits, std::vector<cplx> amplitudes);

  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  std::span<cplx> amplitudes() noexcept { return amps_; }
  double norm() const;

 private:
  StateVector() = default;
  int n_ = 0;
  std::vector<cplx> amps_;
};

/// Mixed state on n qubits stored row-major as a 2^n x 2^n array.
class DensityMatrix {
 public:
  static DensityMatrix basis(int n_qubits, std::uint64_t index);
  /// |psi><psi|
  static DensityMatrix from_pure(const StateVector& psi);
  /// Validates Hermiticity (1e-10), unit trace (1e-10) and shape.
  DensityMatrix(int n_qubits, std::vector<cplx> entries);

  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_; }
  std::span<const cplx> entries() const noexcept { return rho_; }
  std::span<cplx> entries() noexcept { return rho_; }
  cplx operator()(std::size_t r, std::size_t c) const { return rho_[r * dim() + c]; }

  cplx trace() const;
  double hermitian_defect() const;
  /// Smallest eigenvalue of the real part; valid for the real-valued states
  /// produced by RY/CNOT circuits, used by invariant checks.
  double min_eigenvalue() const;
  CMatrix to_matrix() const;

 private:
  DensityMatrix() = default;
  int n_ = 0;
  std::vector<cplx> rho_;
};

}  // namespace wgvqe
