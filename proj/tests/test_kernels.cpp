#include <gtest/gtest.h>

#include <vector>

#include "oracles.hpp"
#include "wgvqe/kernels.hpp"

using namespace wgvqe;
namespace ks = wgvqe::kernels::serial;
namespace kp = wgvqe::kernels::parallel;

namespace {

constexpr int kBits = 13;  // above the parallel threshold

std::vector<cplx> random_vec(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  for (auto& a : v) a = cplx(rng.normal(), rng.normal());
  return v;
}

double diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

kernels::Mat2 random_mat(Rng& rng) {
  return {cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal()),
          cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal())};
}

}  // namespace

TEST(Kernels, PauliPhaseTable) {
  // Y|0> = i|1>, Y|1> = -i|0>
  EXPECT_EQ(kernels::pauli_phase(0, 1, 1), cplx(0, 1));
  EXPECT_EQ(kernels::pauli_phase(1, 1, 1), cplx(0, -1));
  EXPECT_EQ(kernels::pauli_phase(3, 3, 0), cplx(1, 0));
  EXPECT_EQ(kernels::pauli_phase(1, 3, 0), cplx(-1, 0));
}

TEST(Kernels, DepositOutside) {
  EXPECT_EQ(kernels::deposit_outside(0b11, 0b010), 0b101u);
  EXPECT_EQ(kernels::deposit_outside(0b101, 0b0110), 0b10001u);
}

TEST(Kernels, SerialSingleQubitMatchesKronecker) {
  Rng rng(1);
  const int n = 4;
  for (int q = 0; q < n; ++q) {
    auto v = random_vec(16, rng);
    const auto u = random_mat(rng);
    const CMatrix full = oracle::single_qubit_full(n, q, oracle::mat2(u.m00, u.m01, u.m10, u.m11));
    std::vector<cplx> want(16);
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j) want[i] += full(i, j) * v[j];
    ks::apply_1q(v, static_cast<unsigned>(n - 1 - q), u);
    EXPECT_LT(diff(v, want), 1e-12);
  }
}

TEST(Kernels, ParallelMatchesSerialGates) {
  Rng rng(2);
  const std::size_t dim = std::size_t{1} << kBits;
  for (unsigned bit : {0u, 5u, 12u}) {
    auto a = random_vec(dim, rng);
    auto b = a;
    const auto u = random_mat(rng);
    ks::apply_1q(a, bit, u);
    kp::apply_1q(b, bit, u);
    EXPECT_EQ(diff(a, b), 0.0);
  }
  for (auto [c, t] : {std::pair{0u, 12u}, std::pair{12u, 3u}, std::pair{4u, 5u}}) {
    auto a = random_vec(dim, rng);
    auto b = a;
    ks::apply_cnot(a, c, t);
    kp::apply_cnot(b, c, t);
    EXPECT_EQ(diff(a, b), 0.0);
  }
}

TEST(Kernels, ParallelReductionsMatchSerial) {
  Rng rng(3);
  const std::size_t dim = std::size_t{1} << kBits;
  const auto psi = random_vec(dim, rng);
  for (int rep = 0; rep < 5; ++rep) {
    const std::uint64_t x = rng.next_u64() & (dim - 1);
    const std::uint64_t z = rng.next_u64() & (dim - 1);
    const int y = __builtin_popcountll(x & z);
    const cplx s = ks::pauli_expectation(psi, x, z, y);
    const cplx p = kp::pauli_expectation(psi, x, z, y);
    EXPECT_NEAR(std::abs(s - p), 0.0, 1e-9 * std::max(1.0, std::abs(s)));
    // chunked reduction gives the same bits on every call
    EXPECT_EQ(p, kp::pauli_expectation(psi, x, z, y));
  }
}

TEST(Kernels, AccumulatePauliAgrees) {
  Rng rng(4);
  const std::size_t dim = std::size_t{1} << kBits;
  const auto in = random_vec(dim, rng);
  std::vector<cplx> a(dim), b(dim);
  const std::uint64_t x = 0b1010011, z = 0b1100001;
  ks::accumulate_pauli(in, a, cplx(0.5, -0.25), x, z, 2);
  kp::accumulate_pauli(in, b, cplx(0.5, -0.25), x, z, 2);
  EXPECT_EQ(diff(a, b), 0.0);
}

TEST(Kernels, DensityKernelsAgree) {
  Rng rng(5);
  const std::size_t dim = 128;  // dim^2 above the threshold
  auto rho = random_vec(dim * dim, rng);
  const std::uint64_t x = 0b0100101, z = 0b0011100;
  const cplx s = ks::pauli_trace(rho, dim, x, z, 1);
  const cplx p = kp::pauli_trace(rho, dim, x, z, 1);
  EXPECT_NEAR(std::abs(s - p), 0.0, 1e-9 * std::max(1.0, std::abs(s)));
  auto r2 = rho;
  ks::depolarize(rho, dim, 0b1000010, 0.3);
  kp::depolarize(r2, dim, 0b1000010, 0.3);
  EXPECT_LT(diff(rho, r2), 1e-12);
}

TEST(Kernels, DepolarizeMatchesPauliTwirl) {
  Rng rng(6);
  const int n = 3;
  const auto psi = oracle::random_state(n, rng);
  CMatrix rho(8, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  std::vector<cplx> flat(rho.data().begin(), rho.data().end());
  // qubits 0 and 2 are bits 2 and 0
  ks::depolarize(flat, 8, 0b101, 0.4);
  const CMatrix want = oracle::depolarize(rho, n, {0, 2}, 0.4);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(std::abs(flat[i * 8 + j] - want(i, j)), 0.0, 1e-12);
}
