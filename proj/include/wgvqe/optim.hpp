#pragma once

#include <span>
#include <vector>

namespace wgvqe {

struct AdamOptions {
  double learning_rate = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias-corrected moments. Each instance owns its own moment
/// buffers, so the circuit optimizer and the Q-network optimizer are
/// configured independently.
class Adam {
 public:
  Adam(std::size_t n_params, AdamOptions options);

  const AdamOptions& options() const noexcept { return opt_; }
  long steps() const noexcept { return t_; }
  void reset();
  /// params -= lr * m_hat / (sqrt(v_hat) + eps)
  void step(std::span<double> params, std::span<const double> grad);

 private:
  AdamOptions opt_;
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

}  // namespace wgvqe
