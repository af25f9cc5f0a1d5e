#pragma once

// Dense float64 tensors with reverse-mode gradient accumulation.
// The graph is a throwaway tape: every forward pass builds fresh nodes
// that hang off the persistent leaf (parameter) tensors, and backward()
// walks the tape once in reverse topological order.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace biaslab {

using Shape = std::vector<std::size_t>;

std::string shape_str(const Shape& s);

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until allocated
  bool requires_grad = false;
  bool backward_done = false;  // set on a loss root once consumed

  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  std::size_t numel() const { return data.size(); }
  void ensure_grad() {
    if (grad.empty()) grad.assign(data.size(), 0.0);
  }
};

}  // namespace detail

class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from_data(Shape shape, std::vector<double> data,
                          bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t numel() const { return node_->data.size(); }
  std::size_t dim(std::size_t i) const { return node_->shape.at(i); }

  std::vector<double>& data() { return node_->data; }
  const std::vector<double>& data() const { return node_->data; }

  double& at(std::size_t i) { return node_->data.at(i); }
  double at(std::size_t i) const { return node_->data.at(i); }
  double& at(std::size_t r, std::size_t c);
  double at(std::size_t r, std::size_t c) const;

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool rg);

  bool has_grad() const { return node_ && !node_->grad.empty(); }
  const std::vector<double>& grad() const;
  std::vector<double>& grad();
  void zero_grad();

  std::shared_ptr<detail::Node> node() const { return node_; }
  static Tensor wrap(std::shared_ptr<detail::Node> n) { return Tensor(std::move(n)); }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<detail::Node> node_;
};

// Runs reverse-mode accumulation from a scalar loss. `seed` scales the
// whole gradient (used for loss averaging across a batch). A given loss
// node may be consumed once; a second call throws.
void backward(const Tensor& loss, double seed = 1.0);

// Deterministic counter-based random stream. Identical (seed, stream_id,
// draw index) produce identical values on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view stream_id);

  std::uint64_t next_u64();
  double uniform();                  // [0, 1)
  double normal();                   // standard normal, consumes 2 draws
  std::size_t uniform_int(std::size_t n);  // [0, n), unbiased

  std::uint64_t seed() const { return seed_; }
  const std::string& stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::string stream_id_;
  std::uint64_t state_;
};

}  // namespace biaslab
