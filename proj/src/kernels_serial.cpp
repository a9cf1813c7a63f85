#include <bit>

#include "wgvqe/kernels.hpp"

namespace wgvqe::kernels::serial {

void apply_1q(std::span<cplx> v, unsigned bit, const Mat2& u) {
  const std::uint64_t stride = std::uint64_t{1} << bit;
  const std::uint64_t lo = stride - 1;
  const std::uint64_t half = v.size() / 2;
  for (std::uint64_t k = 0; k < half; ++k) {
    const std::uint64_t i0 = ((k & ~lo) << 1) | (k & lo);
    const std::uint64_t i1 = i0 | stride;
    const cplx a0 = v[i0];
    const cplx a1 = v[i1];
    v[i0] = u.m00 * a0 + u.m01 * a1;
    v[i1] = u.m10 * a0 + u.m11 * a1;
  }
}

void apply_cnot(std::span<cplx> v, unsigned control_bit, unsigned target_bit) {
  const std::uint64_t c = std::uint64_t{1} << control_bit;
  const std::uint64_t t = std::uint64_t{1} << target_bit;
  for (std::uint64_t i = 0; i < v.size(); ++i)
    if ((i & c) && !(i & t)) std::swap(v[i], v[i | t]);
}

cplx pauli_expectation(std::span<const cplx> psi, std::uint64_t x_mask, std::uint64_t z_mask,
                       int y_count) {
  cplx acc{};
  for (std::uint64_t i = 0; i < psi.size(); ++i)
    acc += std::conj(psi[i ^ x_mask]) * pauli_phase(i, z_mask, y_count) * psi[i];
  return acc;
}

cplx pauli_trace(std::span<const cplx> rho, std::size_t dim, std::uint64_t x_mask,
                 std::uint64_t z_mask, int y_count) {
  cplx acc{};
  for (std::uint64_t i = 0; i < dim; ++i)
    acc += pauli_phase(i, z_mask, y_count) * rho[i * dim + (i ^ x_mask)];
  return acc;
}

void depolarize(std::span<cplx> rho, std::size_t dim, std::uint64_t mask, double p) {
  const int k = std::popcount(mask);
  const std::uint64_t reps = dim >> k;
  const double inv = 1.0 / static_cast<double>(std::uint64_t{1} << k);
  for (std::uint64_t ri = 0; ri < reps; ++ri) {
    const std::uint64_t i0 = deposit_outside(ri, mask);
    for (std::uint64_t rj = 0; rj < reps; ++rj) {
      const std::uint64_t j0 = deposit_outside(rj, mask);
      cplx avg{};
      // iterate submasks of mask (includes 0)
      std::uint64_t a = 0;
      do {
        avg += rho[(i0 | a) * dim + (j0 | a)];
        a = (a - mask) & mask;
      } while (a != 0);
      avg *= inv;
      a = 0;
      do {
        std::uint64_t b = 0;
        do {
          cplx& e = rho[(i0 | a) * dim + (j0 | b)];
          e = (1.0 - p) * e + (a == b ? p * avg : cplx{});
          b = (b - mask) & mask;
        } while (b != 0);
        a = (a - mask) & mask;
      } while (a != 0);
    }
  }
}

void accumulate_pauli(std::span<const cplx> in, std::span<cplx> out, cplx coeff, std::uint64_t x_mask,
                      std::uint64_t z_mask, int y_count) {
  for (std::uint64_t i = 0; i < in.size(); ++i)
    out[i ^ x_mask] += coeff * pauli_phase(i, z_mask, y_count) * in[i];
}

}  // namespace wgvqe::kernels::serial
