#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wgvqe/rng.hpp"

namespace wgvqe {

/// Fully connected ReLU network with a linear output layer.
///
/// Parameters live in one flat vector. Layer l stores its weights
/// input-major (W[i * out + o]) followed by its biases, which keeps the
/// sparse one-hot observations cheap to push through the first layer.
class QNetwork {
 public:
  QNetwork() = default;
  /// He-uniform weights drawn from `rng`, zero biases.
  QNetwork(std::size_t n_inputs, std::vector<std::size_t> hidden, std::size_t n_outputs, Rng& rng);

  std::size_t n_inputs() const noexcept { return sizes_.front(); }
  std::size_t n_outputs() const noexcept { return sizes_.back(); }
  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
  std::size_t n_params() const noexcept { return params_.size(); }

  std::span<const double> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }
  bool same_shape(const QNetwork& other) const noexcept { return sizes_ == other.sizes_; }

  std::vector<double> forward(std::span<const double> x) const;
  /// argmax of forward(x); ties go to the lowest index.
  std::size_t greedy_action(std::span<const double> x) const;

  /// Mean squared error between Q(x_b, a_b) and y_b over the batch, and its
  /// gradient with respect to params().
  double loss_and_gradient(std::span<const std::vector<double>> inputs, std::span<const std::size_t> actions,
                           std::span<const double> targets, std::vector<double>& grad) const;

  bool all_finite() const;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const { return offsets_[layer] + sizes_[layer] * sizes_[layer + 1]; }
  /// Activations of every layer (post-ReLU for hidden layers).
  void forward_all(std::span<const double> x, std::vector<std::vector<double>>& acts) const;

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

}  // namespace wgvqe
