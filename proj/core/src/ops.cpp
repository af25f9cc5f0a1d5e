#include "biaslab/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biaslab {

using detail::Node;
using NodePtr = std::shared_ptr<Node>;

namespace {

Tensor make_out(Shape shape, std::vector<NodePtr> parents) {
  bool rg = false;
  for (const auto& p : parents) rg = rg || p->requires_grad;
  Tensor out = Tensor::zeros(std::move(shape), rg);
  if (rg) out.node()->parents = std::move(parents);
  return out;
}

void check_matrix(const Tensor& t, const char* who) {
  if (!t.defined() || t.shape().size() != 2) {
    throw std::invalid_argument(std::string(who) + ": expected a matrix, got " +
                                (t.defined() ? shape_str(t.shape()) : "undefined"));
  }
}

void check_vector(const Tensor& t, const char* who) {
  if (!t.defined() || t.shape().size() != 1) {
    throw std::invalid_argument(std::string(who) + ": expected a vector, got " +
                                (t.defined() ? shape_str(t.shape()) : "undefined"));
  }
}

}  // namespace

Tensor matmul_bias(const Tensor& x, const Tensor& W, const Tensor& b) {
  check_matrix(x, "matmul_bias(x)");
  check_matrix(W, "matmul_bias(W)");
  check_vector(b, "matmul_bias(b)");
  const std::size_t n = x.dim(0), d_in = x.dim(1);
  const std::size_t d_out = W.dim(0);
  if (W.dim(1) != d_in || b.dim(0) != d_out) {
    throw std::invalid_argument("matmul_bias: shape mismatch x" + shape_str(x.shape()) + " W" +
                                shape_str(W.shape()) + " b" + shape_str(b.shape()));
  }

  Tensor out = make_out({n, d_out}, {x.node(), W.node(), b.node()});
  const double* xd = x.data().data();
  const double* wd = W.data().data();
  const double* bd = b.data().data();
  double* od = out.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d_out; ++j) {
      double acc = 0.0;
      const double* xr = xd + i * d_in;
      const double* wr = wd + j * d_in;
      for (std::size_t k = 0; k < d_in; ++k) acc += wr[k] * xr[k];
      od[i * d_out + j] = acc + bd[j];
    }
  }

  if (out.requires_grad()) {
    out.node()->backward = [n, d_in, d_out](Node& o) {
      Node* xn = o.parents[0].get();
      Node* wn = o.parents[1].get();
      Node* bn = o.parents[2].get();
      const double* g = o.grad.data();
      if (xn->requires_grad) {
        xn->ensure_grad();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < d_in; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d_out; ++j)
              acc += g[i * d_out + j] * wn->data[j * d_in + k];
            xn->grad[i * d_in + k] += acc;
          }
      }
      if (wn->requires_grad) {
        wn->ensure_grad();
        for (std::size_t j = 0; j < d_out; ++j)
          for (std::size_t k = 0; k < d_in; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
              acc += g[i * d_out + j] * xn->data[i * d_in + k];
            wn->grad[j * d_in + k] += acc;
          }
      }
      if (bn->requires_grad) {
        bn->ensure_grad();
        for (std::size_t j = 0; j < d_out; ++j) {
          double acc = 0.0;
          for (std::size_t i = 0; i < n; ++i) acc += g[i * d_out + j];
          bn->grad[j] += acc;
        }
      }
    };
  }
  return out;
}

Tensor matmul_t(const Tensor& x, const Tensor& W) {
  check_matrix(x, "matmul_t(x)");
  check_matrix(W, "matmul_t(W)");
  const std::size_t n = x.dim(0), d_in = x.dim(1), d_out = W.dim(0);
  if (W.dim(1) != d_in) {
    throw std::invalid_argument("matmul_t: shape mismatch x" + shape_str(x.shape()) + " W" +
                                shape_str(W.shape()));
  }
  Tensor out = make_out({n, d_out}, {x.node(), W.node()});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d_out; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d_in; ++k) acc += W.data()[j * d_in + k] * x.data()[i * d_in + k];
      out.data()[i * d_out + j] = acc;
    }
  if (out.requires_grad()) {
    out.node()->backward = [n, d_in, d_out](Node& o) {
      Node* xn = o.parents[0].get();
      Node* wn = o.parents[1].get();
      const double* g = o.grad.data();
      if (xn->requires_grad) {
        xn->ensure_grad();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < d_in; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d_out; ++j)
              acc += g[i * d_out + j] * wn->data[j * d_in + k];
            xn->grad[i * d_in + k] += acc;
          }
      }
      if (wn->requires_grad) {
        wn->ensure_grad();
        for (std::size_t j = 0; j < d_out; ++j)
          for (std::size_t k = 0; k < d_in; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
              acc += g[i * d_out + j] * xn->data[i * d_in + k];
            wn->grad[j * d_in + k] += acc;
          }
      }
    };
  }
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  check_matrix(a, "matmul(a)");
  check_matrix(b, "matmul(b)");
  const std::size_t n = a.dim(0), m = a.dim(1), p = b.dim(1);
  if (b.dim(0) != m) {
    throw std::invalid_argument("matmul: shape mismatch a" + shape_str(a.shape()) + " b" +
                                shape_str(b.shape()));
  }
  Tensor out = make_out({n, p}, {a.node(), b.node()});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) acc += a.data()[i * m + k] * b.data()[k * p + j];
      out.data()[i * p + j] = acc;
    }
  if (out.requires_grad()) {
    out.node()->backward = [n, m, p](Node& o) {
      Node* an = o.parents[0].get();
      Node* bn = o.parents[1].get();
      const double* g = o.grad.data();
      if (an->requires_grad) {
        an->ensure_grad();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < m; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j) acc += g[i * p + j] * bn->data[k * p + j];
            an->grad[i * m + k] += acc;
          }
      }
      if (bn->requires_grad) {
        bn->ensure_grad();
        for (std::size_t k = 0; k < m; ++k)
          for (std::size_t j = 0; j < p; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += an->data[i * m + k] * g[i * p + j];
            bn->grad[k * p + j] += acc;
          }
      }
    };
  }
  return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  check_matrix(a, "matmul_nt(a)");
  check_matrix(b, "matmul_nt(b)");
  const std::size_t n = a.dim(0), d = a.dim(1), m = b.dim(0);
  if (b.dim(1) != d) {
    throw std::invalid_argument("matmul_nt: shape mismatch a" + shape_str(a.shape()) + " b" +
                                shape_str(b.shape()));
  }
  Tensor out = make_out({n, m}, {a.node(), b.node()});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += a.data()[i * d + k] * b.data()[j * d + k];
      out.data()[i * m + j] = acc;
    }
  if (out.requires_grad()) {
    out.node()->backward = [n, d, m](Node& o) {
      Node* an = o.parents[0].get();
      Node* bn = o.parents[1].get();
      const double* g = o.grad.data();
      if (an->requires_grad) {
        an->ensure_grad();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < d; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += g[i * m + j] * bn->data[j * d + k];
            an->grad[i * d + k] += acc;
          }
      }
      if (bn->requires_grad) {
        bn->ensure_grad();
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t k = 0; k < d; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += g[i * m + j] * an->data[i * d + k];
            bn->grad[j * d + k] += acc;
          }
      }
    };
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument("add: shape mismatch " + shape_str(a.shape()) + " vs " +
                                shape_str(b.shape()));
  }
  Tensor out = make_out(a.shape(), {a.node(), b.node()});
  for (std::size_t i = 0; i < a.numel(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  if (out.requires_grad()) {
    out.node()->backward = [](Node& o) {
      for (int s = 0; s < 2; ++s) {
        Node* pn = o.parents[s].get();
        if (!pn->requires_grad) continue;
        pn->ensure_grad();
        for (std::size_t i = 0; i < o.grad.size(); ++i) pn->grad[i] += o.grad[i];
      }
    };
  }
  return out;
}

Tensor scale(const Tensor& x, double c) {
  Tensor out = make_out(x.shape(), {x.node()});
  for (std::size_t i = 0; i < x.numel(); ++i) out.data()[i] = x.data()[i] * c;
  if (out.requires_grad()) {
    out.node()->backward = [c](Node& o) {
      Node* xn = o.parents[0].get();
      if (!xn->requires_grad) return;
      xn->ensure_grad();
      for (std::size_t i = 0; i < o.grad.size(); ++i) xn->grad[i] += c * o.grad[i];
    };
  }
  return out;
}

Tensor softmax_rows(const Tensor& logits) {
  check_matrix(logits, "softmax_rows");
  const std::size_t n = logits.dim(0), K = logits.dim(1);
  if (K < 1) throw std::invalid_argument("softmax_rows: empty rows");
  Tensor out = make_out({n, K}, {logits.node()});
  for (std::size_t r = 0; r < n; ++r) {
    const double* z = logits.data().data() + r * K;
    double* p = out.data().data() + r * K;
    double mx = z[0];
    for (std::size_t j = 1; j < K; ++j) mx = std::max(mx, z[j]);
    double s = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      p[j] = std::exp(z[j] - mx);
      s += p[j];
    }
    for (std::size_t j = 0; j < K; ++j) p[j] /= s;
  }
  if (out.requires_grad()) {
    out.node()->backward = [n, K](Node& o) {
      Node* zn = o.parents[0].get();
      if (!zn->requires_grad) return;
      zn->ensure_grad();
      for (std::size_t r = 0; r < n; ++r) {
        const double* p = o.data.data() + r * K;
        const double* g = o.grad.data() + r * K;
        double dot = 0.0;
        for (std::size_t j = 0; j < K; ++j) dot += p[j] * g[j];
        for (std::size_t j = 0; j < K; ++j) zn->grad[r * K + j] += p[j] * (g[j] - dot);
      }
    };
  }
  return out;
}

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;   // 1/sqrt(2)
constexpr double kInvSqrt2Pi = 0.3989422804014326779; // 1/sqrt(2*pi)
}  // namespace

Tensor gelu(const Tensor& x) {
  Tensor out = make_out(x.shape(), {x.node()});
  for (std::size_t i = 0; i < x.numel(); ++i) {
    double v = x.data()[i];
    out.data()[i] = v * 0.5 * std::erfc(-v * kInvSqrt2);
  }
  if (out.requires_grad()) {
    out.node()->backward = [](Node& o) {
      Node* xn = o.parents[0].get();
      if (!xn->requires_grad) return;
      xn->ensure_grad();
      for (std::size_t i = 0; i < o.grad.size(); ++i) {
        double v = xn->data[i];
        double phi = 0.5 * std::erfc(-v * kInvSqrt2);
        double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
        xn->grad[i] += o.grad[i] * (phi + v * pdf);
      }
    };
  }
  return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                  std::vector<double>* mu_out, std::vector<double>* sigma_out) {
  check_matrix(x, "layer_norm(x)");
  check_vector(gain, "layer_norm(gain)");
  check_vector(bias, "layer_norm(bias)");
  const std::size_t n = x.dim(0), H = x.dim(1);
  if (H < 2) throw std::invalid_argument("layer_norm: degenerate width H=1");
  if (gain.dim(0) != H || bias.dim(0) != H) {
    throw std::invalid_argument("layer_norm: gain/bias " + shape_str(gain.shape()) + "/" +
                                shape_str(bias.shape()) + " do not match width " + std::to_string(H));
  }

  Tensor out = make_out({n, H}, {x.node(), gain.node(), bias.node()});
  auto xhat = std::make_shared<std::vector<double>>(n * H);
  auto sigma = std::make_shared<std::vector<double>>(n);
  if (mu_out) mu_out->resize(n);
  if (sigma_out) sigma_out->resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double* xr = x.data().data() + r * H;
    double mu = 0.0;
    for (std::size_t j = 0; j < H; ++j) mu += xr[j];
    mu /= static_cast<double>(H);
    double var = 0.0;
    for (std::size_t j = 0; j < H; ++j) {
      double d = xr[j] - mu;
      var += d * d;
    }
    var /= static_cast<double>(H);
    double sg = std::sqrt(var + kLayerNormEps);
    (*sigma)[r] = sg;
    if (mu_out) (*mu_out)[r] = mu;
    if (sigma_out) (*sigma_out)[r] = sg;
    for (std::size_t j = 0; j < H; ++j) {
      double h = (xr[j] - mu) / sg;
      (*xhat)[r * H + j] = h;
      out.data()[r * H + j] = gain.data()[j] * h + bias.data()[j];
    }
  }
  if (out.requires_grad()) {
    out.node()->backward = [n, H, xhat, sigma](Node& o) {
      Node* xn = o.parents[0].get();
      Node* gn = o.parents[1].get();
      Node* bn = o.parents[2].get();
      const double* g = o.grad.data();
      if (gn->requires_grad) {
        gn->ensure_grad();
        for (std::size_t j = 0; j < H; ++j) {
          double acc = 0.0;
          for (std::size_t r = 0; r < n; ++r) acc += g[r * H + j] * (*xhat)[r * H + j];
          gn->grad[j] += acc;
        }
      }
      if (bn->requires_grad) {
        bn->ensure_grad();
        for (std::size_t j = 0; j < H; ++j) {
          double acc = 0.0;
          for (std::size_t r = 0; r < n; ++r) acc += g[r * H + j];
          bn->grad[j] += acc;
        }
      }
      if (xn->requires_grad) {
        xn->ensure_grad();
        const double invH = 1.0 / static_cast<double>(H);
        for (std::size_t r = 0; r < n; ++r) {
          double m1 = 0.0, m2 = 0.0;
          for (std::size_t j = 0; j < H; ++j) {
            double dh = g[r * H + j] * gn->data[j];
            m1 += dh;
            m2 += dh * (*xhat)[r * H + j];
          }
          m1 *= invH;
          m2 *= invH;
          const double invsg = 1.0 / (*sigma)[r];
          for (std::size_t j = 0; j < H; ++j) {
            double dh = g[r * H + j] * gn->data[j];
            xn->grad[r * H + j] += invsg * (dh - m1 - (*xhat)[r * H + j] * m2);
          }
        }
      }
    };
  }
  return out;
}

Tensor dropout(const Tensor& x, double p, RngStream& rng, bool training) {
  if (p < 0.0 || p >= 1.0) {
    throw std::invalid_argument("dropout: p must be in [0,1), got " + std::to_string(p));
  }
  if (!training || p == 0.0) {
    // exact identity; still a node so graph wiring stays uniform
    Tensor out = make_out(x.shape(), {x.node()});
    out.data() = x.data();
    if (out.requires_grad()) {
      out.node()->backward = [](Node& o) {
        Node* xn = o.parents[0].get();
        if (!xn->requires_grad) return;
        xn->ensure_grad();
        for (std::size_t i = 0; i < o.grad.size(); ++i) xn->grad[i] += o.grad[i];
      };
    }
    return out;
  }
  Tensor out = make_out(x.shape(), {x.node()});
  auto mask = std::make_shared<std::vector<double>>(x.numel());
  const double keep_scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < x.numel(); ++i) {
    double m = (rng.uniform() < p) ? 0.0 : keep_scale;
    (*mask)[i] = m;
    out.data()[i] = x.data()[i] * m;
  }
  if (out.requires_grad()) {
    out.node()->backward = [mask](Node& o) {
      Node* xn = o.parents[0].get();
      if (!xn->requires_grad) return;
      xn->ensure_grad();
      for (std::size_t i = 0; i < o.grad.size(); ++i) xn->grad[i] += o.grad[i] * (*mask)[i];
    };
  }
  return out;
}

Tensor cross_entropy(const Tensor& logits, const std::vector<std::size_t>& labels) {
  check_matrix(logits, "cross_entropy");
  const std::size_t n = logits.dim(0), K = logits.dim(1);
  if (labels.size() != n) {
    throw std::invalid_argument("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                                std::to_string(n) + " rows");
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (labels[r] >= K) {
      throw std::out_of_range("cross_entropy: label " + std::to_string(labels[r]) + " out of range [0," +
                              std::to_string(K) + ") at row " + std::to_string(r));
    }
  }
  Tensor out = make_out({1}, {logits.node()});
  auto probs = std::make_shared<std::vector<double>>(n * K);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double* z = logits.data().data() + r * K;
    double mx = z[0];
    for (std::size_t j = 1; j < K; ++j) mx = std::max(mx, z[j]);
    double s = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      double e = std::exp(z[j] - mx);
      (*probs)[r * K + j] = e;
      s += e;
    }
    for (std::size_t j = 0; j < K; ++j) (*probs)[r * K + j] /= s;
    total += (std::log(s) + mx) - z[labels[r]];
  }
  out.data()[0] = total / static_cast<double>(n);
  if (out.requires_grad()) {
    auto labels_copy = labels;
    out.node()->backward = [n, K, probs, labels_copy](Node& o) {
      Node* zn = o.parents[0].get();
      if (!zn->requires_grad) return;
      zn->ensure_grad();
      const double gout = o.grad[0] / static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < K; ++j) {
          double d = (*probs)[r * K + j] - (j == labels_copy[r] ? 1.0 : 0.0);
          zn->grad[r * K + j] += gout * d;
        }
    };
  }
  return out;
}

Tensor embedding_lookup(const Tensor& table, const std::vector<std::size_t>& ids) {
  check_matrix(table, "embedding_lookup");
  const std::size_t V = table.dim(0), H = table.dim(1);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= V) {
      throw std::out_of_range("embedding_lookup: id " + std::to_string(ids[i]) +
                              " out of vocabulary [0," + std::to_string(V) + ") at position " +
                              std::to_string(i));
    }
  }
  const std::size_t n = ids.size();
  Tensor out = make_out({n, H}, {table.node()});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < H; ++j) out.data()[i * H + j] = table.data()[ids[i] * H + j];
  if (out.requires_grad()) {
    auto ids_copy = ids;
    out.node()->backward = [H, ids_copy](Node& o) {
      Node* tn = o.parents[0].get();
      if (!tn->requires_grad) return;
      tn->ensure_grad();
      for (std::size_t i = 0; i < ids_copy.size(); ++i)
        for (std::size_t j = 0; j < H; ++j) tn->grad[ids_copy[i] * H + j] += o.grad[i * H + j];
    };
  }
  return out;
}

Tensor gather_rows(const Tensor& x, const std::vector<std::size_t>& rows) {
  check_matrix(x, "gather_rows");
  const std::size_t n = x.dim(0), H = x.dim(1);
  for (auto r : rows) {
    if (r >= n) throw std::out_of_range("gather_rows: row " + std::to_string(r) + " out of range");
  }
  Tensor out = make_out({rows.size(), H}, {x.node()});
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < H; ++j) out.data()[i * H + j] = x.data()[rows[i] * H + j];
  if (out.requires_grad()) {
    auto rows_copy = rows;
    out.node()->backward = [H, rows_copy](Node& o) {
      Node* xn = o.parents[0].get();
      if (!xn->requires_grad) return;
      xn->ensure_grad();
      for (std::size_t i = 0; i < rows_copy.size(); ++i)
        for (std::size_t j = 0; j < H; ++j) xn->grad[rows_copy[i] * H + j] += o.grad[i * H + j];
    };
  }
  return out;
}

Tensor slice_cols(const Tensor& x, std::size_t start, std::size_t len) {
  check_matrix(x, "slice_cols");
  const std::size_t n = x.dim(0), H = x.dim(1);
  if (start + len > H || len == 0) {
    throw std::invalid_argument("slice_cols: [" + std::to_string(start) + "," +
                                std::to_string(start + len) + ") out of width " + std::to_string(H));
  }
  Tensor out = make_out({n, len}, {x.node()});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < len; ++j) out.data()[i * len + j] = x.data()[i * H + start + j];
  if (out.requires_grad()) {
    out.node()->backward = [n, H, start, len](Node& o) {
      Node* xn = o.parents[0].get();
      if (!xn->requires_grad) return;
      xn->ensure_grad();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < len; ++j) xn->grad[i * H + start + j] += o.grad[i * len + j];
    };
  }
  return out;
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no parts");
  const std::size_t n = parts[0].dim(0);
  std::size_t H = 0;
  std::vector<NodePtr> parents;
  for (const auto& p : parts) {
    check_matrix(p, "concat_cols");
    if (p.dim(0) != n) {
      throw std::invalid_argument("concat_cols: row mismatch " + shape_str(p.shape()));
    }
    H += p.dim(1);
    parents.push_back(p.node());
  }
  Tensor out = make_out({n, H}, std::move(parents));
  std::size_t off = 0;
  for (const auto& p : parts) {
    const std::size_t w = p.dim(1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < w; ++j) out.data()[i * H + off + j] = p.data()[i * w + j];
    off += w;
  }
  if (out.requires_grad()) {
    out.node()->backward = [n, H](Node& o) {
      std::size_t off2 = 0;
      for (auto& pp : o.parents) {
        Node* pn = pp.get();
        const std::size_t w = pn->shape[1];
        if (pn->requires_grad) {
          pn->ensure_grad();
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < w; ++j) pn->grad[i * w + j] += o.grad[i * H + off2 + j];
        }
        off2 += w;
      }
    };
  }
  return out;
}

Tensor sum(const Tensor& x) {
  Tensor out = make_out({1}, {x.node()});
  double acc = 0.0;
  for (double v : x.data()) acc += v;
  out.data()[0] = acc;
  if (out.requires_grad()) {
    out.node()->backward = [](Node& o) {
      Node* xn = o.parents[0].get();
      if (!xn->requires_grad) return;
      xn->ensure_grad();
      for (auto& g : xn->grad) g += o.grad[0];
    };
  }
  return out;
}

std::vector<std::size_t> argmax_rows(const Tensor& logits) {
  check_matrix(logits, "argmax_rows");
  const std::size_t n = logits.dim(0), K = logits.dim(1);
  std::vector<std::size_t> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < K; ++j)
      if (logits.data()[r * K + j] > logits.data()[r * K + best]) best = j;
    out[r] = best;
  }
  return out;
}

}  // namespace biaslab
