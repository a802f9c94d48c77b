#include "graphsum/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace graphsum::nn {

GradCheckReport grad_check(const std::function<Tensor(std::vector<Tensor>&)>& f,
                           std::vector<Tensor>& inputs, double step, double tolerance,
                           const std::vector<std::string>& names) {
  // Analytic pass.
  for (auto& t : inputs) t.zero_grad();
  std::vector<std::vector<double>> analytic(inputs.size());
  {
    Tape tape;
    TapeScope scope(tape);
    Tensor loss = f(inputs);
    if (loss.size() != 1) {
      throw ShapeError("grad_check: function output is not scalar, shape " +
                       shape_str(loss.shape()));
    }
    tape.backward(loss);
    for (std::size_t p = 0; p < inputs.size(); ++p) {
      analytic[p] = inputs[p].has_grad()
                        ? inputs[p].grad()
                        : std::vector<double>(inputs[p].size(), 0.0);
    }
  }
  for (auto& t : inputs) t.zero_grad();

  GradCheckReport report;
  for (std::size_t p = 0; p < inputs.size(); ++p) {
    auto& data = inputs[p].mutable_data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double saved = data[i];
      data[i] = saved + step;
      const double up = f(inputs).item();
      data[i] = saved - step;
      const double down = f(inputs).item();
      data[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[p][i];
      const double denom = std::max(std::abs(a) + std::abs(numeric), 1e-4);
      const double rel = std::abs(a - numeric) / denom;
      ++report.checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst = {p < names.size() ? names[p] : "input" + std::to_string(p), i, a,
                        numeric, rel};
      }
    }
  }
  report.passed = report.max_rel_error < tolerance;
  return report;
}

}  // namespace graphsum::nn
