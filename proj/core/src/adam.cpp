#include "graphsum/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace graphsum::nn {

void AdamState::step(std::vector<NamedParam>& params) {
  if (m_.empty()) {
    m_.resize(params.size());
    v_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i].assign(params[i].tensor.size(), 0.0);
      v_[i].assign(params[i].tensor.size(), 0.0);
    }
  }
  if (m_.size() != params.size()) {
    throw std::runtime_error("adam_step: parameter count changed under the optimizer");
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& t = params[p].tensor;
    if (!t.has_grad()) {
      throw std::runtime_error("adam_step: missing gradient for parameter '" +
                               params[p].name + "'");
    }
    const auto& g = t.grad();
    auto& data = t.mutable_data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      m_[p][i] = beta1_ * m_[p][i] + (1.0 - beta1_) * g[i];
      v_[p][i] = beta2_ * v_[p][i] + (1.0 - beta2_) * g[i] * g[i];
      const double mhat = m_[p][i] / bc1;
      const double vhat = v_[p][i] / bc2;
      data[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
    t.zero_grad();
  }
}

}  // namespace graphsum::nn
