#pragma once

#include <functional>
#include <string>
#include <vector>

#include "graphsum/tensor.hpp"

namespace graphsum::nn {

struct GradCheckEntry {
  std::string param;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct GradCheckReport {
  bool passed = false;
  double max_rel_error = 0.0;
  GradCheckEntry worst;
  std::size_t checked = 0;
};

// Compares the tape gradient of f against central finite differences for
// every element of every input. f must return a scalar; it is re-run for
// each perturbation, so keep inputs desk-sized.
GradCheckReport grad_check(
    const std::function<Tensor(std::vector<Tensor>&)>& f, std::vector<Tensor>& inputs,
    double step = 1e-5, double tolerance = 1e-4,
    const std::vector<std::string>& names = {});

}  // namespace graphsum::nn
