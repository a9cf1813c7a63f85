#include "wgvqe/optim.hpp"

#include <cmath>

#include "wgvqe/error.hpp"

namespace wgvqe {

Adam::Adam(std::size_t n_params, AdamOptions options)
    : opt_(options), m_(n_params, 0.0), v_(n_params, 0.0) {
  if (!(opt_.learning_rate > 0.0)) throw InvalidArgument("Adam: learning rate must be positive");
}

void Adam::reset() {
  std::fill(m_.begin(), m_.end(), 0.0);
  std::fill(v_.begin(), v_.end(), 0.0);
  t_ = 0;
}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw InvalidArgument("Adam::step: size mismatch");
  ++t_;
  const double bc1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    m_[k] = opt_.beta1 * m_[k] + (1.0 - opt_.beta1) * grad[k];
    v_[k] = opt_.beta2 * v_[k] + (1.0 - opt_.beta2) * grad[k] * grad[k];
    params[k] -= opt_.learning_rate * (m_[k] / bc1) / (std::sqrt(v_[k] / bc2) + opt_.epsilon);
  }
}

}  // namespace wgvqe
