#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wgvqe/ansatz.hpp"
#include "wgvqe/error.hpp"
#include "wgvqe/optim.hpp"
#include "wgvqe/ssvqe.hpp"

using namespace wgvqe;

namespace {

const WaveguideOperator& tm3() {
  static const auto op = build_operator(ModeFamily::TM, 3);
  return op;
}

double finite_difference(const Circuit& c, std::vector<double> p, std::size_t k, const PauliSum& h,
                         const SsvqeConfig& cfg, double step) {
  Rng rng(0);
  p[k] += step;
  const double up = weighted_cost(c, p, h, cfg, rng);
  p[k] -= 2 * step;
  const double down = weighted_cost(c, p, h, cfg, rng);
  return (up - down) / (2 * step);
}

}  // namespace

TEST(Cost, EmptyCircuitWeightedEnergy) {
  Rng rng(1);
  const Circuit empty(3);
  SsvqeConfig cfg;
  EXPECT_NEAR(weighted_cost(empty, {}, tm3().pauli, cfg, rng), 8.0, 1e-12);
  const auto e = state_energies(empty, {}, tm3().pauli, cfg.basis);
  EXPECT_NEAR(e[0], 3.0, 1e-12);
  EXPECT_NEAR(e[1], 2.0, 1e-12);
}

TEST(Cost, SingleWeightIsPlainVqe) {
  Rng rng(2);
  const Circuit c = build_hea(3, 2);
  const auto p = initial_parameters(c, rng);
  SsvqeConfig cfg;
  cfg.weights = {1.0};
  cfg.basis = {0};
  const double want = oracle::quadratic_form(to_complex(tm3().matrix), run_statevector(c, p, 0).amplitudes()).real();
  EXPECT_NEAR(weighted_cost(c, p, tm3().pauli, cfg, rng), want, 1e-12);
}

TEST(Cost, NoisyExactMatchesDensityOracle) {
  Rng rng(3);
  const Circuit c = build_hea(3, 1);
  const auto p = initial_parameters(c, rng);
  SsvqeConfig cfg;
  cfg.noise = NoiseSpec::depolarizing(0.05);
  const CMatrix h = to_complex(tm3().matrix);
  double want = 0;
  for (std::size_t j = 0; j < 2; ++j) {
    const CMatrix rho = oracle::run_density(c, p, cfg.basis[j], 0.05);
    want += cfg.weights[j] * oracle::trace(oracle::matmul(h, rho)).real();
  }
  EXPECT_NEAR(weighted_cost(c, p, tm3().pauli, cfg, rng), want, 1e-12);
}

TEST(Config, ValidationRules) {
  SsvqeConfig cfg;
  EXPECT_NO_THROW(cfg.validate(3));
  cfg.weights = {1.0, 2.0};
  EXPECT_THROW(cfg.validate(3), InvalidArgument);
  cfg.weights = {2.0, 2.0};
  EXPECT_THROW(cfg.validate(3), InvalidArgument);
  cfg.weights = {2.0, 1.0};
  cfg.basis = {0, 0};
  EXPECT_THROW(cfg.validate(3), InvalidArgument);
  cfg.basis = {0, 8};
  EXPECT_THROW(cfg.validate(3), InvalidArgument);
  cfg.basis = {0, 1};
  cfg.evaluator = Evaluator::fixed(0);
  EXPECT_THROW(cfg.validate(3), InvalidArgument);
}

TEST(Gradient, ZeroForIdentityHamiltonian) {
  Rng rng(4);
  const Circuit c = build_hea(3, 2);
  const auto p = initial_parameters(c, rng);
  const PauliSum id(3, {{1.7, PauliString("III")}});
  SsvqeConfig cfg;
  for (double g : parameter_shift_gradient(c, p, id, cfg, rng)) EXPECT_NEAR(g, 0.0, 1e-14);
  for (double g : adjoint_gradient(c, p, id, cfg.weights, cfg.basis)) EXPECT_NEAR(g, 0.0, 1e-14);
}

TEST(Gradient, SingleQubitZAtHalfPi) {
  Rng rng(5);
  Circuit c(1);
  c.add_ry(0);
  const PauliSum z(1, {{1.0, PauliString("Z")}});
  SsvqeConfig cfg;
  cfg.weights = {1.0};
  cfg.basis = {0};
  const std::vector<double> p{std::numbers::pi / 2};
  EXPECT_NEAR(parameter_shift_gradient(c, p, z, cfg, rng)[0], -1.0, 1e-14);
  EXPECT_NEAR(adjoint_gradient(c, p, z, cfg.weights, cfg.basis)[0], -1.0, 1e-14);
}

TEST(Gradient, ParameterShiftMatchesFiniteDifferences) {
  Rng rng(6);
  for (int rep = 0; rep < 5; ++rep) {
    const auto [c, p] = oracle::random_circuit(3, 14, rng);
    SsvqeConfig cfg;
    const auto g = parameter_shift_gradient(c, p, tm3().pauli, cfg, rng);
    for (std::size_t k = 0; k < p.size(); ++k)
      EXPECT_NEAR(g[k], finite_difference(c, p, k, tm3().pauli, cfg, 1e-5), 1e-5);
  }
}

TEST(Gradient, NoisyParameterShiftMatchesFiniteDifferences) {
  Rng rng(7);
  const auto [c, p] = oracle::random_circuit(3, 8, rng);
  SsvqeConfig cfg;
  cfg.noise = NoiseSpec::depolarizing(0.02);
  const auto g = parameter_shift_gradient(c, p, tm3().pauli, cfg, rng);
  for (std::size_t k = 0; k < p.size(); ++k)
    EXPECT_NEAR(g[k], finite_difference(c, p, k, tm3().pauli, cfg, 1e-5), 1e-5);
}

TEST(Gradient, AdjointMatchesParameterShift) {
  Rng rng(8);
  for (int n : {2, 3, 5}) {
    const auto op = build_operator(ModeFamily::TE, n);
    for (int rep = 0; rep < 4; ++rep) {
      const auto [c, p] = oracle::random_circuit(n, 20, rng);
      SsvqeConfig cfg;
      cfg.weights = {3.0, 2.0, 1.0};
      cfg.basis = {0, 1, 2};
      const auto a = adjoint_gradient(c, p, op.pauli, cfg.weights, cfg.basis);
      const auto s = parameter_shift_gradient(c, p, op.pauli, cfg, rng);
      ASSERT_EQ(a.size(), s.size());
      for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], s[k], 1e-10);
    }
  }
}

TEST(ShotPlan, EntriesAndProbabilities) {
  SsvqeConfig cfg;
  const auto plan = build_shot_plan(tm3().pauli, cfg.weights, cfg.basis);
  EXPECT_EQ(plan.entries.size(), 20u);
  EXPECT_NEAR(plan.l1, 11.25, 1e-12);
  EXPECT_NEAR(plan.constant_offset, 3 * 2.25, 1e-12);
  double total = 0;
  for (const auto& e : plan.entries) {
    total += e.p;
    if (e.state == 0 && e.pauli.str() == "IIX") {
      EXPECT_NEAR(e.c, -2.0, 1e-15);
      EXPECT_NEAR(e.p, 2.0 / 11.25, 1e-15);
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(plan.cumulative.back(), 1.0, 1e-12);
  EXPECT_THROW(build_shot_plan(PauliSum(3, {}), cfg.weights), InvalidArgument);
}

TEST(Adaptive, EigenstateInputsAreExact) {
  // |00> and |11> are both +1 eigenstates of ZZ, so every draw returns l1.
  Rng rng(9);
  const PauliSum h(2, {{0.5, PauliString("II")}, {1.5, PauliString("ZZ")}});
  SsvqeConfig cfg;
  cfg.basis = {0, 3};
  const auto plan = build_shot_plan(h, cfg.weights, cfg.basis);
  const Circuit empty(2);
  EXPECT_NEAR(adaptive_estimate(plan, empty, {}, 10, rng), 3 * (0.5 + 1.5), 1e-12);
}

TEST(Adaptive, LargeBudgetIsClose) {
  Rng rng(10);
  SsvqeConfig cfg;
  const auto plan = build_shot_plan(tm3().pauli, cfg.weights, cfg.basis);
  EXPECT_NEAR(adaptive_estimate(plan, Circuit(3), {}, 50000, rng), 8.0, 0.15);
}

TEST(Adaptive, UnbiasedOnRandomCircuit) {
  Rng rng(11);
  const auto [c, p] = oracle::random_circuit(3, 12, rng);
  SsvqeConfig cfg;
  const auto plan = build_shot_plan(tm3().pauli, cfg.weights, cfg.basis);
  const double exact = weighted_cost(c, p, tm3().pauli, cfg, rng);
  const int reps = 400, budget = 200;
  double acc = 0;
  for (int r = 0; r < reps; ++r) acc += adaptive_estimate(plan, c, p, budget, rng);
  // each draw has |value| <= l1, so the SE is at most l1 / sqrt(reps * budget)
  EXPECT_NEAR(acc / reps, exact, 5 * plan.l1 / std::sqrt(double(reps) * budget));
}

TEST(Adaptive, FixedShotsUnbiased) {
  Rng rng(12);
  const auto [c, p] = oracle::random_circuit(3, 12, rng);
  SsvqeConfig cfg;
  const double exact = weighted_cost(c, p, tm3().pauli, cfg, rng);
  cfg.evaluator = Evaluator::fixed(100);
  double acc = 0;
  const int reps = 300;
  for (int r = 0; r < reps; ++r) acc += weighted_cost(c, p, tm3().pauli, cfg, rng);
  EXPECT_NEAR(acc / reps, exact, 0.05);
}

TEST(Optimize, WeightInvarianceAndSortedOutput) {
  const Circuit c = build_hea(3, 6);
  SsvqeConfig a;
  a.max_iterations = 1500;
  SsvqeConfig b = a;
  b.weights = {3.0, 1.0};
  Rng ra(0), rb(0);
  const auto oa = optimize(c, tm3(), a, ra);
  const auto ob = optimize(c, tm3(), b, rb);
  const auto ref = reference_spectrum(tm3(), 2);
  for (const auto* o : {&oa, &ob}) {
    ASSERT_EQ(o->energies.size(), 2u);
    EXPECT_LE(o->energies[0], o->energies[1]);
    EXPECT_NEAR(o->energies[0], ref[0].value, 1e-4);
    EXPECT_NEAR(o->energies[1], ref[1].value, 1e-4);
    EXPECT_EQ(o->states.size(), 2u);
  }
}

TEST(Optimize, TraceIsRecordedAndCostDrops) {
  const Circuit c = build_hea(3, 2);
  SsvqeConfig cfg;
  cfg.max_iterations = 50;
  cfg.convergence_tol = 0;
  Rng rng(1);
  const auto o = optimize(c, tm3().pauli, cfg, rng);
  EXPECT_EQ(o.iterations, 50);
  ASSERT_FALSE(o.trace.empty());
  EXPECT_LT(o.trace.back().cost, o.trace.front().cost);
  EXPECT_NEAR(o.final_cost, 2 * o.state_energies[0] + o.state_energies[1], 1e-12);
}

TEST(Optimize, NoisyRunFillsDensities) {
  const Circuit c = build_hea(3, 1);
  SsvqeConfig cfg;
  cfg.max_iterations = 5;
  cfg.noise = NoiseSpec::depolarizing(0.01);
  Rng rng(2);
  const auto o = optimize(c, tm3().pauli, cfg, rng);
  EXPECT_EQ(o.densities.size(), 2u);
  EXPECT_TRUE(o.states.empty());
}

TEST(Optimize, InitialParameterLengthChecked) {
  const Circuit c = build_hea(3, 1);
  Rng rng(3);
  const std::vector<double> wrong(2, 0.0);
  EXPECT_THROW(optimize(c, tm3().pauli, SsvqeConfig{}, rng, wrong), InvalidArgument);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Adam adam(2, {0.1});
  std::vector<double> p{1.0, -1.0};
  const std::vector<double> g{3.0, -0.2};
  adam.step(p, g);
  EXPECT_NEAR(p[0], 0.9, 1e-7);
  EXPECT_NEAR(p[1], -0.9, 1e-7);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(Adam, MinimizesQuadratic) {
  Adam adam(1, {0.05});
  std::vector<double> x{4.0};
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> g{2 * (x[0] - 1.5)};
    adam.step(x, g);
  }
  EXPECT_NEAR(x[0], 1.5, 1e-3);
}
