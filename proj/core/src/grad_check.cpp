#include "biaslab/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biaslab {

namespace {

double eval_scalar(const std::function<Tensor()>& loss_fn) {
  Tensor loss = loss_fn();
  if (loss.numel() != 1) throw std::invalid_argument("grad_check: loss must be scalar");
  return loss.data()[0];
}

}  // namespace

GradCheckReport grad_check(const std::function<Tensor()>& loss_fn,
                           const std::vector<std::pair<std::string, Tensor>>& params,
                           double eps, std::size_t max_coords_per_param,
                           std::uint64_t sample_seed) {
  const double v1 = eval_scalar(loss_fn);
  const double v2 = eval_scalar(loss_fn);
  if (v1 != v2) {
    throw std::runtime_error("grad_check: loss function is non-deterministic (" +
                             std::to_string(v1) + " vs " + std::to_string(v2) +
                             "); disable dropout");
  }

  for (const auto& [name, t] : params) {
    Tensor mutable_t = t;
    mutable_t.zero_grad();
  }
  {
    Tensor loss = loss_fn();
    backward(loss);
  }

  RngStream pick(sample_seed, "grad_check");
  GradCheckReport report;
  for (const auto& [name, t] : params) {
    GradCheckEntry entry;
    entry.name = name;
    const std::size_t n = t.numel();
    std::vector<std::size_t> coords;
    if (n <= max_coords_per_param) {
      for (std::size_t i = 0; i < n; ++i) coords.push_back(i);
    } else {
      for (std::size_t i = 0; i < max_coords_per_param; ++i) coords.push_back(pick.uniform_int(n));
    }
    Tensor param = t;
    for (std::size_t c : coords) {
      const double analytic = param.has_grad() ? param.grad()[c] : 0.0;
      const double orig = param.data()[c];
      param.data()[c] = orig + eps;
      const double fp = eval_scalar(loss_fn);
      param.data()[c] = orig - eps;
      const double fm = eval_scalar(loss_fn);
      param.data()[c] = orig;
      const double numeric = (fp - fm) / (2.0 * eps);
      const double rel = std::abs(analytic - numeric) /
                         std::max({1.0, std::abs(analytic), std::abs(numeric)});
      entry.max_rel_err = std::max(entry.max_rel_err, rel);
      ++entry.coords_checked;
    }
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
    report.coords_checked += entry.coords_checked;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace biaslab
