#pragma once

#include <cstddef>
#include <vector>

#include "graphsum/tensor.hpp"

namespace graphsum::nn {

// Every op records itself on the active tape when any input requires grad.
// Shapes are validated eagerly; mismatches throw ShapeError naming the op.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double c);
// a: n x d, bias: 1 x d, broadcast over rows.
Tensor add_row(const Tensor& a, const Tensor& bias);

Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end);
Tensor gather_rows(const Tensor& a, const std::vector<std::size_t>& rows);

Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope);
Tensor elu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor tanh_op(const Tensor& a);

Tensor sum_all(const Tensor& a);
// Mean of the given rows, as a 1 x d tensor.
Tensor mean_rows(const Tensor& a, const std::vector<std::size_t>& rows);
// Column-wise max over all rows (max-over-time pooling); ties take the
// first row.
Tensor max_over_rows(const Tensor& a);
// Sliding windows of k consecutive rows flattened to one row each:
// (n x d) -> (n-k+1) x (k*d). Requires n >= k.
Tensor im2row(const Tensor& a, std::size_t k);

// Softmax over z (E x 1) computed independently within each segment.
// segments[e] is the query-node id of entry e; ids need not be contiguous.
Tensor segment_softmax(const Tensor& z, const std::vector<std::size_t>& segments);
// out[q] = sum over entries e with segments[e]==q of weights[e] * values[e,:].
// weights: E x 1, values: E x d, result: num_segments x d.
Tensor segment_weighted_sum(const Tensor& weights, const Tensor& values,
                            const std::vector<std::size_t>& segments,
                            std::size_t num_segments);

// Mean binary cross-entropy over all elements, computed from logits in a
// numerically stable form. labels must match the logits element count.
Tensor bce_with_logits_mean(const Tensor& logits, const std::vector<double>& labels);
// Sum (not mean) variant, for loss accumulation across examples.
Tensor bce_with_logits_sum(const Tensor& logits, const std::vector<double>& labels);

}  // namespace graphsum::nn
