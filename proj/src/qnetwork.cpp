#include "wgvqe/qnetwork.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "wgvqe/error.hpp"

namespace wgvqe {

QNetwork::QNetwork(std::size_t n_inputs, std::vector<std::size_t> hidden, std::size_t n_outputs, Rng& rng) {
  if (n_inputs == 0 || n_outputs == 0) throw InvalidArgument("QNetwork: layer sizes must be positive");
  sizes_.push_back(n_inputs);
  for (std::size_t h : hidden) {
    if (h == 0) throw InvalidArgument("QNetwork: hidden sizes must be positive");
    sizes_.push_back(h);
  }
  sizes_.push_back(n_outputs);

  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(sizes_[l]));
    const std::size_t w0 = weight_offset(l);
    for (std::size_t k = 0; k < sizes_[l] * sizes_[l + 1]; ++k) params_[w0 + k] = rng.uniform(-bound, bound);
  }
}

void QNetwork::forward_all(std::span<const double> x, std::vector<std::vector<double>>& acts) const {
  if (x.size() != n_inputs())
    throw InvalidArgument(fmt::format("QNetwork: expected {} inputs, got {}", n_inputs(), x.size()));
  const std::size_t layers = sizes_.size() - 1;
  acts.resize(layers + 1);
  acts[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = sizes_[l];
    const std::size_t out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    std::vector<double>& h = acts[l + 1];
    h.assign(b, b + out);
    const std::vector<double>& a = acts[l];
    for (std::size_t i = 0; i < in; ++i) {
      const double ai = a[i];
      if (ai == 0.0) continue;
      const double* wi = w + i * out;
      for (std::size_t o = 0; o < out; ++o) h[o] += wi[o] * ai;
    }
    if (l + 1 < layers)
      for (double& v : h) v = std::max(v, 0.0);
  }
}

std::vector<double> QNetwork::forward(std::span<const double> x) const {
  std::vector<std::vector<double>> acts;
  forward_all(x, acts);
  return std::move(acts.back());
}

std::size_t QNetwork::greedy_action(std::span<const double> x) const {
  const auto q = forward(x);
  return static_cast<std::size_t>(std::ranges::max_element(q) - q.begin());
}

double QNetwork::loss_and_gradient(std::span<const std::vector<double>> inputs, std::span<const std::size_t> actions,
                                   std::span<const double> targets, std::vector<double>& grad) const {
  const std::size_t batch = inputs.size();
  if (batch == 0) throw InvalidArgument("QNetwork: empty batch");
  if (actions.size() != batch || targets.size() != batch)
    throw InvalidArgument("QNetwork: batch inputs, actions and targets differ in length");
  grad.assign(params_.size(), 0.0);

  const std::size_t layers = sizes_.size() - 1;
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev;
  double loss = 0.0;
  for (std::size_t s = 0; s < batch; ++s) {
    if (actions[s] >= n_outputs()) throw InvalidArgument("QNetwork: action index out of range");
    forward_all(inputs[s], acts);
    const double err = acts.back()[actions[s]] - targets[s];
    loss += err * err;

    delta.assign(n_outputs(), 0.0);
    delta[actions[s]] = 2.0 * err / static_cast<double>(batch);
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t in = sizes_[l];
      const std::size_t out = sizes_[l + 1];
      const double* w = params_.data() + weight_offset(l);
      double* gw = grad.data() + weight_offset(l);
      double* gb = grad.data() + bias_offset(l);
      const std::vector<double>& a = acts[l];
      for (std::size_t o = 0; o < out; ++o) gb[o] += delta[o];
      if (l > 0) prev.assign(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        const double ai = a[i];
        const double* wi = w + i * out;
        double* gwi = gw + i * out;
        if (ai != 0.0)
          for (std::size_t o = 0; o < out; ++o) gwi[o] += ai * delta[o];
        if (l > 0 && ai > 0.0) {
          double acc = 0.0;
          for (std::size_t o = 0; o < out; ++o) acc += wi[o] * delta[o];
          prev[i] = acc;
        }
      }
      if (l > 0) delta.swap(prev);
    }
  }
  return loss / static_cast<double>(batch);
}

bool QNetwork::all_finite() const {
  return std::ranges::all_of(params_, [](double v) { return std::isfinite(v); });
}

}  // namespace wgvqe
