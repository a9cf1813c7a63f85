#include <gtest/gtest.h>

#include <cmath>

#include "wgvqe/error.hpp"
#include "wgvqe/qnetwork.hpp"

using namespace wgvqe;

namespace {

double loss_only(const QNetwork& net, const std::vector<std::vector<double>>& x, const std::vector<std::size_t>& a,
                 const std::vector<double>& y) {
  double l = 0;
  for (std::size_t b = 0; b < x.size(); ++b) {
    const double d = net.forward(x[b])[a[b]] - y[b];
    l += d * d;
  }
  return l / static_cast<double>(x.size());
}

}  // namespace

TEST(QNetwork, ShapeAndInit) {
  Rng rng(1);
  const QNetwork net(10, {8, 6}, 4, rng);
  EXPECT_EQ(net.n_params(), 10u * 8 + 8 + 8 * 6 + 6 + 6 * 4 + 4);
  EXPECT_EQ(net.layer_sizes(), (std::vector<std::size_t>{10, 8, 6, 4}));
  const double bound = std::sqrt(6.0 / 10.0);
  for (std::size_t i = 0; i < 80; ++i) EXPECT_LE(std::abs(net.params()[i]), bound);
  for (std::size_t i = 80; i < 88; ++i) EXPECT_EQ(net.params()[i], 0.0);
  EXPECT_TRUE(net.all_finite());
}

TEST(QNetwork, ForwardByHand) {
  Rng rng(0);
  QNetwork net(2, {2}, 1, rng);
  auto p = net.params();
  // W1 input-major, b1, W2, b2
  const double v[] = {1, -1, 2, 0.5, 0.1, -0.2, 1.0, 2.0, 0.3};
  std::copy(std::begin(v), std::end(v), p.begin());
  const std::vector<double> x{1.0, 2.0};
  // h0 = relu(1*1 + 2*2 + 0.1) = 5.1, h1 = relu(-1 + 1 - 0.2) = 0
  EXPECT_NEAR(net.forward(x)[0], 5.1 + 0.3, 1e-15);
}

TEST(QNetwork, GreedyTieGoesToLowestIndex) {
  Rng rng(0);
  QNetwork net(1, {1}, 3, rng);
  for (auto& w : net.params()) w = 0.0;
  const std::vector<double> x{1.0};
  EXPECT_EQ(net.greedy_action(x), 0u);
  net.params()[net.n_params() - 1] = 1.0;  // bias of the last output
  EXPECT_EQ(net.greedy_action(x), 2u);
}

TEST(QNetwork, GradientMatchesFiniteDifferences) {
  Rng rng(3);
  QNetwork net(4, {5, 3}, 3, rng);
  // nonzero biases so every unit is exercised away from the ReLU kink
  for (auto& w : net.params()) w += 0.05 * rng.normal();
  std::vector<std::vector<double>> x;
  std::vector<std::size_t> a;
  std::vector<double> y;
  for (int b = 0; b < 6; ++b) {
    x.push_back({rng.normal(), rng.normal(), 0.0, rng.normal()});
    a.push_back(rng.below(3));
    y.push_back(rng.normal());
  }
  std::vector<double> grad;
  const double loss = net.loss_and_gradient(x, a, y, grad);
  EXPECT_NEAR(loss, loss_only(net, x, a, y), 1e-12);
  ASSERT_EQ(grad.size(), net.n_params());
  const double h = 1e-4;
  for (std::size_t k = 0; k < net.n_params(); ++k) {
    QNetwork up = net, down = net;
    up.params()[k] += h;
    down.params()[k] -= h;
    const double fd = (loss_only(up, x, a, y) - loss_only(down, x, a, y)) / (2 * h);
    EXPECT_NEAR(grad[k], fd, 1e-4 * std::max(1.0, std::abs(fd))) << k;
  }
}

TEST(QNetwork, RejectsBadShapes) {
  Rng rng(0);
  const QNetwork net(3, {2}, 2, rng);
  EXPECT_THROW(net.forward(std::vector<double>{1.0}), InvalidArgument);
  std::vector<double> grad;
  const std::vector<std::vector<double>> x{{1, 2, 3}};
  const std::vector<std::size_t> bad_action{2};
  const std::vector<double> y{0.0};
  EXPECT_THROW(net.loss_and_gradient(x, bad_action, y, grad), InvalidArgument);
}
