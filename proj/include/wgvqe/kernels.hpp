#pragma once

// Low-level amplitude kernels. Everything here works on raw bit positions
// (bit 0 = least significant bit of the index); the qubit-to-bit mapping is
// the caller's business.
//
// Two interchangeable implementations are provided:
//   kernels::serial    straightforward loops; the reference for tests
//   kernels::parallel  OpenMP loops, engaged once the array is at least
//                      kParallelMinDim long; reductions are split into a
//                      fixed number of chunks and combined in order, so the
//                      result does not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <span>

#include "wgvqe/linalg.hpp"

namespace wgvqe::kernels {

struct Mat2 {
  cplx m00, m01, m10, m11;
  Mat2 conj() const { return {std::conj(m00), std::conj(m01), std::conj(m10), std::conj(m11)}; }
};

inline constexpr std::size_t kParallelMinDim = std::size_t{1} << 12;
inline constexpr std::size_t kReductionChunks = 64;

/// Phase picked up by basis state |i> under a Pauli string with the given
/// masks: P|i> = phase(i) |i ^ x_mask>.
inline cplx pauli_phase(std::uint64_t i, std::uint64_t z_mask, int y_count) {
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int sign = __builtin_popcountll(i & z_mask) & 1;
  return kIPow[(y_count + 2 * sign) & 3];
}

namespace serial {

void apply_1q(std::span<cplx> v, unsigned bit, const Mat2& u);
void apply_cnot(std::span<cplx> v, unsigned control_bit, unsigned target_bit);
/// <psi|P|psi>
cplx pauli_expectation(std::span<const cplx> psi, std::uint64_t x_mask, std::uint64_t z_mask,
                       int y_count);
/// tr(rho P) for a dim x dim row-major rho.
cplx pauli_trace(std::span<const cplx> rho, std::size_t dim, std::uint64_t x_mask,
                 std::uint64_t z_mask, int y_count);
/// rho -> (1-p) rho + p (I/2^k) (x) tr_mask(rho), mask selecting k bits.
void depolarize(std::span<cplx> rho, std::size_t dim, std::uint64_t mask, double p);
/// out[i ^ x] += coeff * phase(i) * in[i], i.e. out += coeff * P in.
void accumulate_pauli(std::span<const cplx> in, std::span<cplx> out, cplx coeff, std::uint64_t x_mask,
                      std::uint64_t z_mask, int y_count);

}  // namespace serial

namespace parallel {

void apply_1q(std::span<cplx> v, unsigned bit, const Mat2& u);
void apply_cnot(std::span<cplx> v, unsigned control_bit, unsigned target_bit);
cplx pauli_expectation(std::span<const cplx> psi, std::uint64_t x_mask, std::uint64_t z_mask,
                       int y_count);
cplx pauli_trace(std::span<const cplx> rho, std::size_t dim, std::uint64_t x_mask,
                 std::uint64_t z_mask, int y_count);
void depolarize(std::span<cplx> rho, std::size_t dim, std::uint64_t mask, double p);
void accumulate_pauli(std::span<const cplx> in, std::span<cplx> out, cplx coeff, std::uint64_t x_mask,
                      std::uint64_t z_mask, int y_count);

}  // namespace parallel

/// Spreads the low bits of `compact` over the positions NOT set in `mask`.
inline std::uint64_t deposit_outside(std::uint64_t compact, std::uint64_t mask) {
  std::uint64_t out = 0;
  std::uint64_t bit = 1;
  while (compact != 0) {
    if ((mask & bit) == 0) {
      if (compact & 1) out |= bit;
      compact >>= 1;
    }
    bit <<= 1;
  }
  return out;
}

}  // namespace wgvqe::kernels
