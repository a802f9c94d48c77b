#include <cmath>

#include <doctest.h>

#include "graphsum/adam.hpp"
#include "graphsum/ops.hpp"

using namespace graphsum::nn;

TEST_CASE("first Adam step moves by about lr in the gradient direction") {
  Tensor w = Tensor::param(1, 1, {0.0});
  w.grad_buffer()[0] = 1.0;
  std::vector<NamedParam> params = {{"w", w}};
  AdamState adam(0.1);
  adam.step(params);
  // Bias-corrected step 1: lr * g / (|g| + eps-ish) ~ lr * sign(g).
  CHECK(w.data()[0] == doctest::Approx(-0.1).epsilon(1e-6));
  const bool stale_grad = w.has_grad() && w.grad()[0] != 0.0;
  CHECK_FALSE(stale_grad);  // grads consumed
}

TEST_CASE("zero gradient leaves the parameter unchanged") {
  Tensor w = Tensor::param(1, 2, {1.5, -2.5});
  w.grad_buffer();  // present but all zero
  std::vector<NamedParam> params = {{"w", w}};
  AdamState adam(0.1);
  adam.step(params);
  CHECK(w.data()[0] == 1.5);
  CHECK(w.data()[1] == -2.5);
}

TEST_CASE("missing gradient is an error naming the parameter") {
  Tensor w = Tensor::param(1, 1, {0.0});
  std::vector<NamedParam> params = {{"scorer.w", w}};
  AdamState adam;
  try {
    adam.step(params);
    FAIL("expected missing-gradient error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("scorer.w") != std::string::npos);
  }
}

TEST_CASE("Adam matches a hand-coded scalar reference trajectory") {
  // Reference loop written directly from the update equations.
  const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double ref_w = 0.0, m = 0.0, v = 0.0;
  std::vector<double> ref_trace;
  for (int t = 1; t <= 100; ++t) {
    const double g = 2.0 * (ref_w - 3.0);  // d/dw (w-3)^2
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mhat = m / (1 - std::pow(b1, t));
    const double vhat = v / (1 - std::pow(b2, t));
    ref_w -= lr * mhat / (std::sqrt(vhat) + eps);
    ref_trace.push_back(ref_w);
  }
  CHECK(std::abs(ref_w - 3.0) < 0.5);

  Tensor w = Tensor::param(1, 1, {0.0});
  std::vector<NamedParam> params = {{"w", w}};
  AdamState adam(lr);
  for (int t = 0; t < 100; ++t) {
    Tape tape;
    TapeScope scope(tape);
    Tensor d = sub(w, Tensor::scalar(3.0));
    tape.backward(mul(d, d));
    adam.step(params);
    CHECK(w.data()[0] == doctest::Approx(ref_trace[static_cast<std::size_t>(t)])
                             .epsilon(1e-12));
  }
  CHECK(std::abs(w.data()[0] - 3.0) < 0.5);
}
