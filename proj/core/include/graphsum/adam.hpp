#pragma once

#include <string>
#include <vector>

#include "graphsum/tensor.hpp"

namespace graphsum::nn {

struct NamedParam {
  std::string name;
  Tensor tensor;
};

// Adam with bias correction. One state instance owns the moment buffers
// for a fixed parameter list; step() consumes and zeroes the grads.
class AdamState {
public:
  AdamState(double learning_rate = 5e-4, double beta1 = 0.9, double beta2 = 0.999,
            double epsilon = 1e-8)
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

  void step(std::vector<NamedParam>& params);

  long long steps_taken() const { return step_; }
  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }

private:
  double lr_, beta1_, beta2_, eps_;
  long long step_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace graphsum::nn
