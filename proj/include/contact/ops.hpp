#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "contact/tensor.hpp"

// Differentiable operations over Tensor. Every function records its inputs
// when gradient recording is on and at least one input requires a gradient.
// Shape violations throw DimensionError naming the offending shapes.
namespace contact::ops {

// [m x k] . [k x p] -> [m x p]
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor reshape(const Tensor& a, Shape shape);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);

// Scales row r of m[n x c] by v[r].
Tensor broadcast_mul(const Tensor& m, const Tensor& v);

// Reduces one axis; a result with no axes left has shape [1].
Tensor sum_axis(const Tensor& a, std::size_t axis);
Tensor mean_axis(const Tensor& a, std::size_t axis);
Tensor sum_all(const Tensor& a);

// Slice `index` along axis 0, dropping that axis.
Tensor select(const Tensor& a, std::size_t index);

Tensor concat_lastdim(std::span<const Tensor> parts);

// Coordinate-wise maximum of same-shape tensors. The gradient flows only to
// the input holding the maximum; ties go to the lowest list index.
Tensor elementwise_max(std::span<const Tensor> parts);

// Softmax over the last axis, max-subtracted. Throws NumericError on
// non-finite input.
Tensor softmax_lastdim(const Tensor& a);

// Group normalization of a[n x d]: statistics over all n rows and the
// d/groups channels of each group, then per-channel scale and shift.
Tensor group_norm(const Tensor& a, std::size_t groups, const Tensor& scale, const Tensor& shift,
                  double eps);

// -[t log s(x) + (1-t) log(1-s(x))] in the overflow-free form
// max(x,0) - x t + log1p(exp(-|x|)).
double bce_with_logits(double logit, int target);

// Sum of bce_with_logits over entries with active[i]; inactive entries
// contribute neither loss nor gradient. Returns shape [1].
Tensor masked_bce_with_logits(const Tensor& logits, std::span<const double> targets,
                              std::span<const bool> active);

}  // namespace contact::ops
