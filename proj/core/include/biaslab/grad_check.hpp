#pragma once

// Finite-difference verification of reverse-mode gradients.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "biaslab/tensor.hpp"

namespace biaslab {

struct GradCheckEntry {
  std::string name;
  double max_rel_err = 0.0;
  std::size_t coords_checked = 0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_err = 0.0;
  std::size_t coords_checked = 0;

  bool passed(double tol) const { return max_rel_err < tol; }
};

// Compares the analytic gradient of `loss_fn` against central differences
// (f(t+eps e) - f(t-eps e)) / 2 eps on sampled coordinates of each listed
// parameter. `loss_fn` must rebuild the graph on every call and be
// deterministic (dropout disabled); non-determinism is detected by a
// repeated evaluation and reported as an error.
GradCheckReport grad_check(const std::function<Tensor()>& loss_fn,
                           const std::vector<std::pair<std::string, Tensor>>& params,
                           double eps = 1e-5, std::size_t max_coords_per_param = 8,
                           std::uint64_t sample_seed = 0);

}  // namespace biaslab
