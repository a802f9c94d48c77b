#include "graphsum/ops.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace graphsum::nn {

namespace {

bool track2(const Tensor& a, const Tensor& b) {
  return Tape::active() != nullptr && (a.requires_grad() || b.requires_grad());
}

bool track1(const Tensor& a) {
  return Tape::active() != nullptr && a.requires_grad();
}

Tensor make_out(std::size_t rows, std::size_t cols, std::vector<double> data, bool track) {
  Tensor t = Tensor::from(rows, cols, std::move(data));
  t.impl()->requires_grad = track;
  return t;
}

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
  }
}

using Impl = std::shared_ptr<TensorImpl>;

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  std::vector<double> out(n * m, 0.0);
  const double* ad = a.data().data();
  const double* bd = b.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ad[i * k + p];
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        out[i * m + j] += av * bd[p * m + j];
      }
    }
  }
  bool tr = track2(a, b);
  Tensor c = make_out(n, m, std::move(out), tr);
  if (tr) {
    Impl ai = a.impl_ptr(), bi = b.impl_ptr(), ci = c.impl_ptr();
    Tape::active()->record(ci, [ai, bi, ci, n, k, m]() {
      const auto& dc = ci->grad;
      if (ai->requires_grad) {
        if (ai->grad.empty()) ai->grad.assign(ai->data.size(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            const double g = dc[i * m + j];
            if (g == 0.0) continue;
            for (std::size_t p = 0; p < k; ++p)
              ai->grad[i * k + p] += g * bi->data[p * m + j];
          }
      }
      if (bi->requires_grad) {
        if (bi->grad.empty()) bi->grad.assign(bi->data.size(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            const double g = dc[i * m + j];
            if (g == 0.0) continue;
            for (std::size_t p = 0; p < k; ++p)
              bi->grad[p * m + j] += ai->data[i * k + p] * g;
          }
      }
    });
  }
  return c;
}

namespace {

template <typename Fwd, typename Bwd>
Tensor elementwise_binary(const char* name, const Tensor& a, const Tensor& b, Fwd fwd,
                          Bwd bwd) {
  check_same_shape(name, a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fwd(a.data()[i], b.data()[i]);
  bool tr = track2(a, b);
  Tensor c = make_out(a.rows(), a.cols(), std::move(out), tr);
  if (tr) {
    Impl ai = a.impl_ptr(), bi = b.impl_ptr(), ci = c.impl_ptr();
    Tape::active()->record(ci, [ai, bi, ci, bwd]() {
      for (std::size_t i = 0; i < ci->data.size(); ++i) {
        double da, db;
        bwd(ai->data[i], bi->data[i], ci->grad[i], &da, &db);
        accum_grad(ai.get(), i, da);
        accum_grad(bi.get(), i, db);
      }
    });
  }
  return c;
}

template <typename Fwd, typename Deriv>
Tensor elementwise_unary(const Tensor& a, Fwd fwd, Deriv deriv) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fwd(a.data()[i]);
  bool tr = track1(a);
  Tensor c = make_out(a.rows(), a.cols(), std::move(out), tr);
  if (tr) {
    Impl ai = a.impl_ptr(), ci = c.impl_ptr();
    Tape::active()->record(ci, [ai, ci, deriv]() {
      for (std::size_t i = 0; i < ci->data.size(); ++i) {
        accum_grad(ai.get(), i, ci->grad[i] * deriv(ai->data[i], ci->data[i]));
      }
    });
  }
  return c;
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return elementwise_binary(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double, double g, double* da, double* db) {
        *da = g;
        *db = g;
      });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return elementwise_binary(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double, double g, double* da, double* db) {
        *da = g;
        *db = -g;
      });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return elementwise_binary(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double x, double y, double g, double* da, double* db) {
        *da = g * y;
        *db = g * x;
      });
}

Tensor scale(const Tensor& a, double c) {
  return elementwise_unary(
      a, [c](double x) { return c * x; }, [c](double, double) { return c; });
}

Tensor add_row(const Tensor& a, const Tensor& bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols()) {
    throw ShapeError("add_row: shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(bias.shape()));
  }
  const std::size_t n = a.rows(), d = a.cols();
  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = a(i, j) + bias(0, j);
  bool tr = track2(a, bias);
  Tensor c = make_out(n, d, std::move(out), tr);
  if (tr) {
    Impl ai = a.impl_ptr(), bi = bias.impl_ptr(), ci = c.impl_ptr();
    Tape::active()->record(ci, [ai, bi, ci, n, d]() {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          const double g = ci->grad[i * d + j];
          accum_grad(ai.get(), i * d + j, g);
          accum_grad(bi.get(), j, g);
        }
    });
  }
  return c;
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const std::size_t n = parts[0].rows();
  std::size_t total = 0;
  bool tr = false;
  for (const auto& p : parts) {
    if (p.rows() != n) {
      throw ShapeError("concat_cols: row mismatch " + shape_str(parts[0].shape()) +
                       " vs " + shape_str(p.shape()));
    }
    total += p.cols();
    tr = tr || p.requires_grad();
  }
  tr = tr && Tape::active();
  std::vector<double> out(n * total);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < p.cols(); ++j)
        out[i * total + off + j] = p(i, j);
    off += p.cols();
  }
  Tensor c = make_out(n, total, std::move(out), tr);
  if (tr) {
    std::vector<Impl> impls;
    for (const auto& p : parts) impls.push_back(p.impl_ptr());
    Impl ci = c.impl_ptr();
    Tape::active()->record(ci, [impls, ci, n, total]() {
      std::size_t off = 0;
      for (const auto& pi : impls) {
        const std::size_t d = pi->shape[1];
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < d; ++j)
            accum_grad(pi.get(), i * d + j, ci->grad[i * total + off + j]);
        off += d;
      }
    });
  }
  return c;
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  const std::size_t d = parts[0].cols();
  std::size_t total = 0;
  bool tr = false;
  for (const auto& p : parts) {
    if (p.cols() != d) {
      throw ShapeError("concat_rows: column mismatch " + shape_str(parts[0].shape()) +
                       " vs " + shape_str(p.shape()));
    }
    total += p.rows();
    tr = tr || p.requires_grad();
  }
  tr = tr && Tape::active();
  std::vector<double> out;
  out.reserve(total * d);
  for (const auto& p : parts) out.insert(out.end(), p.data().begin(), p.data().end());
  Tensor c = make_out(total, d, std::move(out), tr);
  if (tr) {
    std::vector<Impl> impls;
    for (const auto& p : parts) impls.push_back(p.impl_ptr());
    Impl ci = c.impl_ptr();
    Tape::active()->record(ci, [impls, ci]() {
      std::size_t off = 0;
      for (const auto& pi : impls) {
        for (std::size_t i = 0; i < pi->data.size(); ++i)
          accum_grad(pi.get(), i, ci->grad[off + i]);
        off += pi->data.size();
      }
    });
  }
  return c;
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
  if (begin >= end || end > a.cols()) {
    throw ShapeError("slice_cols: range [" + std::to_string(begin) + "," +
                     std::to_string(end) + ") out of shape " + shape_str(a.shape()));
  }
  const std::size_t n = a.rows(), d = end - begin, ad = a.cols();
  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = a(i, begin + j);
  bool tr = track1(a);
  Tensor c = make_out(n, d, std::move(out), tr);
  if (tr) {
    Impl ai = a.impl_ptr(), ci = c.impl_ptr();
    Tape::active()->record(ci, [ai, ci, n, d, ad, begin]() {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
          accum_grad(ai.get(), i * ad + begin + j, ci->grad[i * d + j]);
    });
  }
  return c;
}

Tensor gather_rows(const Tensor& a, const std::vector<std::size_t>& rows) {
  const std::size_t d = a.cols();
  for (std::size_t r : rows) {
    if (r >= a.rows()) {
      throw ShapeError("gather_rows: row index " + std::to_string(r) +
                       " out of shape " + shape_str(a.shape()));
    }
  }
  std::vector<double> out(rows.size() * d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = a(rows[i], j);
  bool tr = track1(a);
  Tensor c = make_out(rows.size(), d, std::move(out), tr);
  if (tr) {
    Impl ai = a.impl_ptr(), ci = c.impl_ptr();
    auto idx = rows;
    Tape::active()->record(ci, [ai, ci, idx, d]() {
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < d; ++j)
          accum_grad(ai.get(), idx[i] * d + j, ci->grad[i * d + j]);
    });
  }
  return c;
}

Tensor relu(const Tensor& a) {
  return elementwise_unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor& a, double slope) {
  return elementwise_unary(
      a, [slope](double x) { return x > 0.0 ? x : slope * x; },
      [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Tensor elu(const Tensor& a) {
  return elementwise_unary(
      a, [](double x) { return x > 0.0 ? x : std::expm1(x); },
      [](double x, double y) { return x > 0.0 ? 1.0 : y + 1.0; });
}

Tensor sigmoid(const Tensor& a) {
  return elementwise_unary(
      a,
      [](double x) {
        return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                        : std::exp(x) / (1.0 + std::exp(x));
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh_op(const Tensor& a) {
  return elementwise_unary(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor sum_all(const Tensor& a) {
  double s = 0.0;
  for (double v : a.data()) s += v;
  bool tr = track1(a);
  Tensor c = make_out(1, 1, {s}, tr);
  if (tr) {
    Impl ai = a.impl_ptr(), ci = c.impl_ptr();
    Tape::active()->record(ci, [ai, ci]() {
      for (std::size_t i = 0; i < ai->data.size(); ++i)
        accum_grad(ai.get(), i, ci->grad[0]);
    });
  }
  return c;
}

Tensor mean_rows(const Tensor& a, const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw ShapeError("mean_rows: empty row set");
  const std::size_t d = a.cols();
  std::vector<double> out(d, 0.0);
  for (std::size_t r : rows) {
    if (r >= a.rows()) {
      throw ShapeError("mean_rows: row index " + std::to_string(r) +
                       " out of shape " + shape_str(a.shape()));
    }
    for (std::size_t j = 0; j < d; ++j) out[j] += a(r, j);
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& v : out) v *= inv;
  bool tr = track1(a);
  Tensor c = make_out(1, d, std::move(out), tr);
  if (tr) {
    Impl ai = a.impl_ptr(), ci = c.impl_ptr();
    auto idx = rows;
    Tape::active()->record(ci, [ai, ci, idx, d, inv]() {
      for (std::size_t r : idx)
        for (std::size_t j = 0; j < d; ++j)
          accum_grad(ai.get(), r * d + j, ci->grad[j] * inv);
    });
  }
  return c;
}

Tensor max_over_rows(const Tensor& a) {
  if (a.rows() == 0) throw ShapeError("max_over_rows: empty input");
  const std::size_t n = a.rows(), d = a.cols();
  std::vector<double> out(d);
  std::vector<std::size_t> argmax(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    double best = a(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      if (a(i, j) > best) {
        best = a(i, j);
        argmax[j] = i;
      }
    }
    out[j] = best;
  }
  bool tr = track1(a);
  Tensor c = make_out(1, d, std::move(out), tr);
  if (tr) {
    Impl ai = a.impl_ptr(), ci = c.impl_ptr();
    Tape::active()->record(ci, [ai, ci, argmax, d]() {
      for (std::size_t j = 0; j < d; ++j)
        accum_grad(ai.get(), argmax[j] * d + j, ci->grad[j]);
    });
  }
  return c;
}

Tensor im2row(const Tensor& a, std::size_t k) {
  if (k == 0 || a.rows() < k) {
    throw ShapeError("im2row: window " + std::to_string(k) + " does not fit shape " +
                     shape_str(a.shape()));
  }
  const std::size_t n = a.rows() - k + 1, d = a.cols(), w = k * d;
  std::vector<double> out(n * w);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < w; ++j) out[i * w + j] = a.data()[i * d + j];
  bool tr = track1(a);
  Tensor c = make_out(n, w, std::move(out), tr);
  if (tr) {
    Impl ai = a.impl_ptr(), ci = c.impl_ptr();
    Tape::active()->record(ci, [ai, ci, n, w, d]() {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < w; ++j)
          accum_grad(ai.get(), i * d + j, ci->grad[i * w + j]);
    });
  }
  return c;
}

Tensor segment_softmax(const Tensor& z, const std::vector<std::size_t>& segments) {
  if (z.size() == 0 || segments.empty()) {
    throw ShapeError("segment_softmax: empty input");
  }
  if (z.cols() != 1 || segments.size() != z.rows()) {
    throw ShapeError("segment_softmax: expected Ex1 values with matching segments, got " +
                     shape_str(z.shape()) + " with " + std::to_string(segments.size()) +
                     " segment ids");
  }
  const std::size_t e = z.rows();
  std::unordered_map<std::size_t, double> seg_max, seg_sum;
  for (std::size_t i = 0; i < e; ++i) {
    auto it = seg_max.find(segments[i]);
    if (it == seg_max.end() || z.data()[i] > it->second) seg_max[segments[i]] = z.data()[i];
  }
  std::vector<double> out(e);
  for (std::size_t i = 0; i < e; ++i) {
    out[i] = std::exp(z.data()[i] - seg_max[segments[i]]);
    seg_sum[segments[i]] += out[i];
  }
  for (std::size_t i = 0; i < e; ++i) out[i] /= seg_sum[segments[i]];
  bool tr = track1(z);
  Tensor c = make_out(e, 1, std::move(out), tr);
  if (tr) {
    Impl zi = z.impl_ptr(), ci = c.impl_ptr();
    auto segs = segments;
    Tape::active()->record(ci, [zi, ci, segs]() {
      // dz_e = a_e * (g_e - sum_{e' in seg} g_e' * a_e')
      std::unordered_map<std::size_t, double> dot;
      for (std::size_t i = 0; i < segs.size(); ++i)
        dot[segs[i]] += ci->grad[i] * ci->data[i];
      for (std::size_t i = 0; i < segs.size(); ++i)
        accum_grad(zi.get(), i, ci->data[i] * (ci->grad[i] - dot[segs[i]]));
    });
  }
  return c;
}

Tensor segment_weighted_sum(const Tensor& weights, const Tensor& values,
                            const std::vector<std::size_t>& segments,
                            std::size_t num_segments) {
  if (weights.cols() != 1 || weights.rows() != values.rows() ||
      segments.size() != values.rows()) {
    throw ShapeError("segment_weighted_sum: shape mismatch " +
                     shape_str(weights.shape()) + " vs " + shape_str(values.shape()));
  }
  const std::size_t e = values.rows(), d = values.cols();
  std::vector<double> out(num_segments * d, 0.0);
  for (std::size_t i = 0; i < e; ++i) {
    if (segments[i] >= num_segments) {
      throw ShapeError("segment_weighted_sum: segment id " +
                       std::to_string(segments[i]) + " out of range " +
                       std::to_string(num_segments));
    }
    const double w = weights.data()[i];
    for (std::size_t j = 0; j < d; ++j) out[segments[i] * d + j] += w * values(i, j);
  }
  bool tr = track2(weights, values);
  Tensor c = make_out(num_segments, d, std::move(out), tr);
  if (tr) {
    Impl wi = weights.impl_ptr(), vi = values.impl_ptr(), ci = c.impl_ptr();
    auto segs = segments;
    Tape::active()->record(ci, [wi, vi, ci, segs, d]() {
      for (std::size_t i = 0; i < segs.size(); ++i) {
        const double* go = &ci->grad[segs[i] * d];
        if (wi->requires_grad) {
          double dw = 0.0;
          for (std::size_t j = 0; j < d; ++j) dw += go[j] * vi->data[i * d + j];
          accum_grad(wi.get(), i, dw);
        }
        if (vi->requires_grad) {
          for (std::size_t j = 0; j < d; ++j)
            accum_grad(vi.get(), i * d + j, wi->data[i] * go[j]);
        }
      }
    });
  }
  return c;
}

namespace {

Tensor bce_with_logits(const Tensor& logits, const std::vector<double>& labels,
                       bool take_mean) {
  if (labels.size() != logits.size()) {
    throw ShapeError("bce_with_logits: label count " + std::to_string(labels.size()) +
                     " vs logits shape " + shape_str(logits.shape()));
  }
  if (logits.size() == 0) throw ShapeError("bce_with_logits: empty input");
  const std::size_t n = logits.size();
  const double norm = take_mean ? 1.0 / static_cast<double>(n) : 1.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = logits.data()[i];
    loss += std::max(x, 0.0) - x * labels[i] + std::log1p(std::exp(-std::abs(x)));
  }
  bool tr = track1(logits);
  Tensor c = make_out(1, 1, {loss * norm}, tr);
  if (tr) {
    Impl li = logits.impl_ptr(), ci = c.impl_ptr();
    auto y = labels;
    Tape::active()->record(ci, [li, ci, y, norm]() {
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = li->data[i];
        const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                                  : std::exp(x) / (1.0 + std::exp(x));
        accum_grad(li.get(), i, ci->grad[0] * norm * (s - y[i]));
      }
    });
  }
  return c;
}

}  // namespace

Tensor bce_with_logits_mean(const Tensor& logits, const std::vector<double>& labels) {
  return bce_with_logits(logits, labels, true);
}

Tensor bce_with_logits_sum(const Tensor& logits, const std::vector<double>& labels) {
  return bce_with_logits(logits, labels, false);
}

}  // namespace graphsum::nn
