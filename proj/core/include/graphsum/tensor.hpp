#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphsum::nn {

// All errors out of the numeric core carry an op name and the offending shapes.
class ShapeError : public std::runtime_error {
public:
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string shape_str(const std::vector<std::size_t>& shape);

struct TensorImpl {
  std::vector<std::size_t> shape;  // always rank 2: rows x cols
  std::vector<double> data;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;
  bool leaf = false;
};

// Value-semantic handle to a dense 2-D double tensor. Data is treated as
// immutable after creation except for the grad buffer.
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}

  static Tensor zeros(std::size_t rows, std::size_t cols);
  static Tensor from(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Tensor scalar(double v);
  // Leaf tensor that participates in gradient accumulation across tapes.
  static Tensor param(std::size_t rows, std::size_t cols, std::vector<double> data);

  bool defined() const { return impl_ != nullptr; }
  std::size_t rows() const { return impl_->shape[0]; }
  std::size_t cols() const { return impl_->shape[1]; }
  std::size_t size() const { return impl_->data.size(); }
  const std::vector<std::size_t>& shape() const { return impl_->shape; }

  const std::vector<double>& data() const { return impl_->data; }
  std::vector<double>& mutable_data() { return impl_->data; }
  double operator()(std::size_t r, std::size_t c) const {
    return impl_->data[r * cols() + c];
  }
  double item() const;

  bool requires_grad() const { return impl_->requires_grad; }
  bool is_leaf() const { return impl_->leaf; }
  bool has_grad() const { return !impl_->grad.empty(); }
  // Sized-on-demand, zero-initialized.
  std::vector<double>& grad_buffer();
  const std::vector<double>& grad() const;
  void zero_grad();

  TensorImpl* impl() const { return impl_.get(); }
  std::shared_ptr<TensorImpl> impl_ptr() const { return impl_; }

private:
  std::shared_ptr<TensorImpl> impl_;
};

// Records the forward computation so gradients can be replayed in reverse.
// One tape is confined to one worker; nested scopes restore the previous
// active tape on destruction.
class Tape {
public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  void record(std::shared_ptr<TensorImpl> out, std::function<void()> backward_fn);

  // Seeds d(loss)=1 and runs the tape in reverse. Grads of leaf tensors
  // accumulate across calls; grads of interior tensors are reset per call.
  void backward(const Tensor& loss);

  void clear() { nodes_.clear(); }
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }

  static Tape* active();

private:
  friend struct TapeScope;
  struct Node {
    std::shared_ptr<TensorImpl> out;
    std::function<void()> fn;
  };
  std::vector<Node> nodes_;
  static Tape*& active_slot();
};

struct TapeScope {
  explicit TapeScope(Tape& tape);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

private:
  Tape* prev_;
};

// Accumulates `v` into the grad buffer of `impl` at flat index `i`.
inline void accum_grad(TensorImpl* impl, std::size_t i, double v) {
  if (!impl->requires_grad) return;
  if (impl->grad.empty()) impl->grad.assign(impl->data.size(), 0.0);
  impl->grad[i] += v;
}

}  // namespace graphsum::nn
