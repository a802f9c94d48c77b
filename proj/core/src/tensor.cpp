#include "graphsum/tensor.hpp"

#include <sstream>

namespace graphsum::nn {

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

Tensor Tensor::zeros(std::size_t rows, std::size_t cols) {
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = {rows, cols};
  impl->data.assign(rows * cols, 0.0);
  return Tensor(std::move(impl));
}

Tensor Tensor::from(std::size_t rows, std::size_t cols, std::vector<double> data) {
  if (data.size() != rows * cols) {
    throw ShapeError("tensor_from: data length " + std::to_string(data.size()) +
                     " does not match shape " + shape_str({rows, cols}));
  }
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = {rows, cols};
  impl->data = std::move(data);
  return Tensor(std::move(impl));
}

Tensor Tensor::scalar(double v) { return from(1, 1, {v}); }

Tensor Tensor::param(std::size_t rows, std::size_t cols, std::vector<double> data) {
  Tensor t = from(rows, cols, std::move(data));
  t.impl()->requires_grad = true;
  t.impl()->leaf = true;
  return t;
}

double Tensor::item() const {
  if (size() != 1) {
    throw ShapeError("item: tensor is not scalar, shape " + shape_str(shape()));
  }
  return impl_->data[0];
}

std::vector<double>& Tensor::grad_buffer() {
  if (impl_->grad.empty()) impl_->grad.assign(impl_->data.size(), 0.0);
  return impl_->grad;
}

const std::vector<double>& Tensor::grad() const { return impl_->grad; }

void Tensor::zero_grad() { impl_->grad.clear(); }

Tape*& Tape::active_slot() {
  thread_local Tape* active = nullptr;
  return active;
}

Tape* Tape::active() { return active_slot(); }

void Tape::record(std::shared_ptr<TensorImpl> out, std::function<void()> backward_fn) {
  nodes_.push_back({std::move(out), std::move(backward_fn)});
}

void Tape::backward(const Tensor& loss) {
  if (loss.size() != 1) {
    throw ShapeError("backward: loss must be scalar, got shape " + shape_str(loss.shape()));
  }
  if (nodes_.empty()) {
    throw std::runtime_error("backward: tape is empty");
  }
  // Interior grads are per-pass scratch; leaf grads persist so repeated
  // backward calls accumulate linearly.
  for (auto& n : nodes_) {
    n.out->grad.assign(n.out->data.size(), 0.0);
  }
  loss.impl()->grad.assign(1, 1.0);
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (!it->out->grad.empty()) it->fn();
  }
}

TapeScope::TapeScope(Tape& tape) {
  prev_ = Tape::active_slot();
  Tape::active_slot() = &tape;
}

TapeScope::~TapeScope() { Tape::active_slot() = prev_; }

}  // namespace graphsum::nn
