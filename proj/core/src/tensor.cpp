#include "biaslab/tensor.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace biaslab {

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << "x";
    os << s[i];
  }
  os << "]";
  return os.str();
}

static std::size_t shape_numel(const Shape& s) {
  std::size_t n = 1;
  for (auto d : s) n *= d;
  return n;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  auto n = std::make_shared<detail::Node>();
  n->data.assign(shape_numel(shape), 0.0);
  n->shape = std::move(shape);
  n->requires_grad = requires_grad;
  return Tensor(std::move(n));
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  Tensor t = zeros(std::move(shape), requires_grad);
  for (auto& v : t.data()) v = value;
  return t;
}

Tensor Tensor::from_data(Shape shape, std::vector<double> data, bool requires_grad) {
  if (shape_numel(shape) != data.size()) {
    throw std::invalid_argument("Tensor: shape " + shape_str(shape) + " does not match data length " +
                                std::to_string(data.size()));
  }
  auto n = std::make_shared<detail::Node>();
  n->shape = std::move(shape);
  n->data = std::move(data);
  n->requires_grad = requires_grad;
  return Tensor(std::move(n));
}

double& Tensor::at(std::size_t r, std::size_t c) {
  if (node_->shape.size() != 2) throw std::invalid_argument("Tensor::at(r,c) on non-matrix");
  return node_->data.at(r * node_->shape[1] + c);
}

double Tensor::at(std::size_t r, std::size_t c) const {
  if (node_->shape.size() != 2) throw std::invalid_argument("Tensor::at(r,c) on non-matrix");
  return node_->data.at(r * node_->shape[1] + c);
}

void Tensor::set_requires_grad(bool rg) {
  node_->requires_grad = rg;
  if (!rg) node_->grad.clear();
}

const std::vector<double>& Tensor::grad() const {
  if (!has_grad()) throw std::runtime_error("Tensor: gradient not populated");
  return node_->grad;
}

std::vector<double>& Tensor::grad() {
  if (!has_grad()) throw std::runtime_error("Tensor: gradient not populated");
  return node_->grad;
}

void Tensor::zero_grad() {
  node_->grad.clear();
  node_->backward_done = false;
}

void backward(const Tensor& loss, double seed) {
  auto root = loss.node();
  if (!root) throw std::invalid_argument("backward: undefined tensor");
  if (root->numel() != 1) {
    throw std::invalid_argument("backward: loss must be scalar, got " + shape_str(root->shape));
  }
  if (root->backward_done) {
    throw std::runtime_error("backward: loss already consumed; rebuild the graph or zero_grad first");
  }
  root->backward_done = true;

  // reverse topological order via iterative DFS
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, std::size_t>> stack;
  stack.emplace_back(root.get(), 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [n, idx] = stack.back();
    if (idx < n->parents.size()) {
      detail::Node* p = n->parents[idx].get();
      ++idx;
      if (p->requires_grad && !visited.count(p)) {
        visited.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  root->ensure_grad();
  root->grad[0] += seed;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    if (n->backward) n->backward(*n);
  }
}

// --- RngStream: splitmix64 over a seed mixed with an FNV-1a stream hash ---

static std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

static std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::string_view stream_id)
    : seed_(seed), stream_id_(stream_id) {
  state_ = seed ^ fnv1a(stream_id);
  // burn-in decorrelates nearby seeds
  splitmix64(state_);
  splitmix64(state_);
}

std::uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  // Box-Muller; consumes exactly two uniforms per call
  double u1 = uniform();
  double u2 = uniform();
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t RngStream::uniform_int(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  std::uint64_t bound = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= bound);
  return static_cast<std::size_t>(x % n);
}

}  // namespace biaslab
