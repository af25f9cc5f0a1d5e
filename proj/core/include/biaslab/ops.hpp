#pragma once

// Differentiable operations on Tensor. Every op returns a fresh node
// whose backward closure accumulates into parents flagged requires_grad.

#include <cstddef>
#include <vector>

#include "biaslab/tensor.hpp"

namespace biaslab {

// out[i,j] = sum_k W[j,k] * x[i,k] + b[j];  x:[n x d_in], W:[d_out x d_in], b:[d_out]
Tensor matmul_bias(const Tensor& x, const Tensor& W, const Tensor& b);

// out = x W^T without bias;  x:[n x d_in], W:[d_out x d_in]
Tensor matmul_t(const Tensor& x, const Tensor& W);

// plain product a[n x m] * b[m x p]
Tensor matmul(const Tensor& a, const Tensor& b);

// a b^T with a:[n x d], b:[m x d] -> [n x m]
Tensor matmul_nt(const Tensor& a, const Tensor& b);

Tensor add(const Tensor& a, const Tensor& b);  // same shape
Tensor scale(const Tensor& x, double c);

// row-wise softmax over the last axis of a matrix [n x K]
Tensor softmax_rows(const Tensor& logits);

// elementwise x * Phi(x), exact erf form: Phi(x) = 0.5 * erfc(-x / sqrt(2))
Tensor gelu(const Tensor& x);

// per-row normalization over the last axis; eps added inside the sqrt of
// the population variance. Optionally reports per-row mu/sigma.
inline constexpr double kLayerNormEps = 1e-12;
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                  std::vector<double>* mu_out = nullptr,
                  std::vector<double>* sigma_out = nullptr);

// inverted dropout: train mode zeroes with probability p and rescales
// survivors by 1/(1-p); eval mode is the exact identity.
Tensor dropout(const Tensor& x, double p, RngStream& rng, bool training);

// mean over rows of -log softmax(logits)[label];  logits:[n x K]
Tensor cross_entropy(const Tensor& logits, const std::vector<std::size_t>& labels);

// rows of table indexed by ids;  table:[V x H] -> [n x H]
Tensor embedding_lookup(const Tensor& table, const std::vector<std::size_t>& ids);

Tensor gather_rows(const Tensor& x, const std::vector<std::size_t>& rows);
Tensor slice_cols(const Tensor& x, std::size_t start, std::size_t len);
Tensor concat_cols(const std::vector<Tensor>& parts);

Tensor sum(const Tensor& x);  // scalar [1]

// argmax per row, forward-only helper
std::vector<std::size_t> argmax_rows(const Tensor& logits);

}  // namespace biaslab
