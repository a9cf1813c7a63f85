#include <omp.h>

#include <array>
#include <bit>

#include "wgvqe/kernels.hpp"

namespace wgvqe::kernels::parallel {

namespace {

// Sums f(i) for i in [0, n) in kReductionChunks fixed slices, then adds the
// slice totals in slice order.
template <typename F>
cplx chunked_sum(std::uint64_t n, F&& f) {
  std::array<cplx, kReductionChunks> partial{};
  const std::int64_t chunks = static_cast<std::int64_t>(kReductionChunks);
  const std::uint64_t per = (n + kReductionChunks - 1) / kReductionChunks;
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * per;
    const std::uint64_t hi = std::min(n, lo + per);
    cplx acc{};
    for (std::uint64_t i = lo; i < hi; ++i) acc += f(i);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  cplx total{};
  for (const cplx& p : partial) total += p;
  return total;
}

}  // namespace

void apply_1q(std::span<cplx> v, unsigned bit, const Mat2& u) {
  if (v.size() < kParallelMinDim) return serial::apply_1q(v, bit, u);
  const std::uint64_t stride = std::uint64_t{1} << bit;
  const std::uint64_t lo = stride - 1;
  const std::int64_t half = static_cast<std::int64_t>(v.size() / 2);
  cplx* data = v.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t kk = 0; kk < half; ++kk) {
    const auto k = static_cast<std::uint64_t>(kk);
    const std::uint64_t i0 = ((k & ~lo) << 1) | (k & lo);
    const std::uint64_t i1 = i0 | stride;
    const cplx a0 = data[i0];
    const cplx a1 = data[i1];
    data[i0] = u.m00 * a0 + u.m01 * a1;
    data[i1] = u.m10 * a0 + u.m11 * a1;
  }
}

void apply_cnot(std::span<cplx> v, unsigned control_bit, unsigned target_bit) {
  if (v.size() < kParallelMinDim) return serial::apply_cnot(v, control_bit, target_bit);
  // Enumerate the quarter of indices with control=1, target=0 directly.
  const std::uint64_t c = std::uint64_t{1} << control_bit;
  const std::uint64_t t = std::uint64_t{1} << target_bit;
  const std::uint64_t mask = c | t;
  const std::int64_t quarter = static_cast<std::int64_t>(v.size() / 4);
  cplx* data = v.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < quarter; ++k) {
    const std::uint64_t i = deposit_outside(static_cast<std::uint64_t>(k), mask) | c;
    std::swap(data[i], data[i | t]);
  }
}

cplx pauli_expectation(std::span<const cplx> psi, std::uint64_t x_mask, std::uint64_t z_mask,
                       int y_count) {
  if (psi.size() < kParallelMinDim) return serial::pauli_expectation(psi, x_mask, z_mask, y_count);
  return chunked_sum(psi.size(), [&](std::uint64_t i) {
    return std::conj(psi[i ^ x_mask]) * pauli_phase(i, z_mask, y_count) * psi[i];
  });
}

cplx pauli_trace(std::span<const cplx> rho, std::size_t dim, std::uint64_t x_mask,
                 std::uint64_t z_mask, int y_count) {
  if (dim < kParallelMinDim) return serial::pauli_trace(rho, dim, x_mask, z_mask, y_count);
  return chunked_sum(dim, [&](std::uint64_t i) {
    return pauli_phase(i, z_mask, y_count) * rho[i * dim + (i ^ x_mask)];
  });
}

void depolarize(std::span<cplx> rho, std::size_t dim, std::uint64_t mask, double p) {
  if (dim * dim < kParallelMinDim) return serial::depolarize(rho, dim, mask, p);
  const int k = std::popcount(mask);
  const std::uint64_t reps = dim >> k;
  const double inv = 1.0 / static_cast<double>(std::uint64_t{1} << k);
  const std::int64_t blocks = static_cast<std::int64_t>(reps * reps);
  cplx* data = rho.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    const auto ub = static_cast<std::uint64_t>(blk);
    const std::uint64_t i0 = deposit_outside(ub / reps, mask);
    const std::uint64_t j0 = deposit_outside(ub % reps, mask);
    cplx avg{};
    std::uint64_t a = 0;
    do {
      avg += data[(i0 | a) * dim + (j0 | a)];
      a = (a - mask) & mask;
    } while (a != 0);
    avg *= inv;
    a = 0;
    do {
      std::uint64_t b = 0;
      do {
        cplx& e = data[(i0 | a) * dim + (j0 | b)];
        e = (1.0 - p) * e + (a == b ? p * avg : cplx{});
        b = (b - mask) & mask;
      } while (b != 0);
      a = (a - mask) & mask;
    } while (a != 0);
  }
}

void accumulate_pauli(std::span<const cplx> in, std::span<cplx> out, cplx coeff, std::uint64_t x_mask,
                      std::uint64_t z_mask, int y_count) {
  if (in.size() < kParallelMinDim) return serial::accumulate_pauli(in, out, coeff, x_mask, z_mask, y_count);
  const std::int64_t n = static_cast<std::int64_t>(in.size());
  const cplx* src = in.data();
  cplx* dst = out.data();
  // i -> i ^ x is a bijection, so iterations write disjoint slots.
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::uint64_t>(ii);
    dst[i ^ x_mask] += coeff * pauli_phase(i, z_mask, y_count) * src[i];
  }
}

}  // namespace wgvqe::kernels::parallel
