#include "contact/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "contact/errors.hpp"

namespace contact::ops {

using detail::Node;

namespace {

using Backward = std::function<void(Node&)>;

// Builds a result node, wiring parents and the backward closure only when the
// graph is being recorded and some input needs a gradient.
Tensor make_result(Shape shape, std::vector<double> value, std::vector<Tensor> inputs, Backward bw) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  node->is_leaf = false;
  const bool needs =
      grad_recording_enabled() &&
      std::any_of(inputs.begin(), inputs.end(), [](const Tensor& t) { return t.requires_grad(); });
  if (needs) {
    node->requires_grad = true;
    node->parents.reserve(inputs.size());
    for (auto& t : inputs) node->parents.push_back(t.node());
    node->backward = std::move(bw);
  }
  return Tensor::wrap(std::move(node));
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
  }
}

void require_rank(const char* op, const Tensor& a, std::size_t rank) {
  if (a.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                         shape_str(a.shape()));
  }
}

Shape drop_axis(const Shape& s, std::size_t axis) {
  Shape out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i != axis) out.push_back(s[i]);
  }
  if (out.empty()) out.push_back(1);
  return out;
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank("matmul", a, 2);
  require_rank("matmul", b, 2);
  const std::size_t m = a.dim(0), k = a.dim(1), p = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions differ, " + shape_str(a.shape()) + " x " +
                         shape_str(b.shape()));
  }
  const auto A = a.data();
  const auto B = b.data();
  std::vector<double> out(m * p, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* row = out.data() + i * p;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double av = A[i * k + kk];
      if (av == 0.0) continue;
      const double* brow = B.data() + kk * p;
      for (std::size_t j = 0; j < p; ++j) row[j] += av * brow[j];
    }
  }
  return make_result({m, p}, std::move(out), {a, b}, [m, k, p](Node& self) {
    Node& na = *self.parents[0];
    Node& nb = *self.parents[1];
    const double* G = self.grad.data();
    if (na.requires_grad) {
      auto ga = na.grad_buffer();
      const double* Bv = nb.value.data();
      for (std::size_t i = 0; i < m; ++i) {
        const double* grow = G + i * p;
        for (std::size_t kk = 0; kk < k; ++kk) {
          const double* brow = Bv + kk * p;
          double acc = 0.0;
          for (std::size_t j = 0; j < p; ++j) acc += grow[j] * brow[j];
          ga[i * k + kk] += acc;
        }
      }
    }
    if (nb.requires_grad) {
      auto gb = nb.grad_buffer();
      const double* Av = na.value.data();
      for (std::size_t i = 0; i < m; ++i) {
        const double* grow = G + i * p;
        for (std::size_t kk = 0; kk < k; ++kk) {
          const double av = Av[i * k + kk];
          if (av == 0.0) continue;
          double* gbrow = gb.data() + kk * p;
          for (std::size_t j = 0; j < p; ++j) gbrow[j] += av * grow[j];
        }
      }
    }
  });
}

Tensor transpose(const Tensor& a) {
  require_rank("transpose", a, 2);
  const std::size_t r = a.dim(0), c = a.dim(1);
  const auto A = a.data();
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = A[i * c + j];
  return make_result({c, r}, std::move(out), {a}, [r, c](Node& self) {
    auto g = self.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) g[i * c + j] += self.grad[j * r + i];
  });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_numel(shape) != a.numel()) {
    throw DimensionError("reshape: cannot view " + shape_str(a.shape()) + " as " + shape_str(shape));
  }
  auto values = std::vector<double>(a.data().begin(), a.data().end());
  return make_result(std::move(shape), std::move(values), {a},
                     [](Node& self) { self.parents[0]->accumulate(self.grad); });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape("add", a, b);
  const auto A = a.data(), B = b.data();
  std::vector<double> out(A.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] + B[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    for (auto& p : self.parents)
      if (p->requires_grad) p->accumulate(self.grad);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape("sub", a, b);
  const auto A = a.data(), B = b.data();
  std::vector<double> out(A.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] - B[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    if (self.parents[0]->requires_grad) self.parents[0]->accumulate(self.grad);
    if (self.parents[1]->requires_grad) {
      auto g = self.parents[1]->grad_buffer();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape("mul", a, b);
  const auto A = a.data(), B = b.data();
  std::vector<double> out(A.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] * B[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    Node& na = *self.parents[0];
    Node& nb = *self.parents[1];
    if (na.requires_grad) {
      auto g = na.grad_buffer();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * nb.value[i];
    }
    if (nb.requires_grad) {
      auto g = nb.grad_buffer();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * na.value[i];
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  const auto A = a.data();
  std::vector<double> out(A.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] * factor;
  return make_result(a.shape(), std::move(out), {a}, [factor](Node& self) {
    auto g = self.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * factor;
  });
}

Tensor relu(const Tensor& a) {
  const auto A = a.data();
  std::vector<double> out(A.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] > 0.0 ? A[i] : 0.0;
  return make_result(a.shape(), std::move(out), {a}, [](Node& self) {
    Node& na = *self.parents[0];
    auto g = na.grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (na.value[i] > 0.0) g[i] += self.grad[i];
  });
}

Tensor sigmoid(const Tensor& a) {
  const auto A = a.data();
  std::vector<double> out(A.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = A[i];
    // Branch keeps exp() argument non-positive.
    out[i] = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  }
  return make_result(a.shape(), std::move(out), {a}, [](Node& self) {
    auto g = self.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = self.value[i];
      g[i] += self.grad[i] * s * (1.0 - s);
    }
  });
}

Tensor broadcast_mul(const Tensor& m, const Tensor& v) {
  require_rank("broadcast_mul", m, 2);
  const std::size_t n = m.dim(0), c = m.dim(1);
  if (v.numel() != n) {
    throw DimensionError("broadcast_mul: vector " + shape_str(v.shape()) + " does not match rows of " +
                         shape_str(m.shape()));
  }
  const auto M = m.data(), V = v.data();
  std::vector<double> out(n * c);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < c; ++j) out[r * c + j] = M[r * c + j] * V[r];
  return make_result(m.shape(), std::move(out), {m, v}, [n, c](Node& self) {
    Node& nm = *self.parents[0];
    Node& nv = *self.parents[1];
    if (nm.requires_grad) {
      auto g = nm.grad_buffer();
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < c; ++j) g[r * c + j] += self.grad[r * c + j] * nv.value[r];
    }
    if (nv.requires_grad) {
      auto g = nv.grad_buffer();
      for (std::size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < c; ++j) acc += self.grad[r * c + j] * nm.value[r * c + j];
        g[r] += acc;
      }
    }
  });
}

Tensor sum_axis(const Tensor& a, std::size_t axis) {
  const auto& s = a.shape();
  if (axis >= s.size()) {
    throw DimensionError("sum_axis: axis " + std::to_string(axis) + " out of range for " + shape_str(s));
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= s[i];
  for (std::size_t i = axis + 1; i < s.size(); ++i) inner *= s[i];
  const std::size_t extent = s[axis];
  const auto A = a.data();
  std::vector<double> out(outer * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t e = 0; e < extent; ++e)
      for (std::size_t i = 0; i < inner; ++i) out[o * inner + i] += A[(o * extent + e) * inner + i];
  return make_result(drop_axis(s, axis), std::move(out), {a}, [outer, extent, inner](Node& self) {
    auto g = self.parents[0]->grad_buffer();
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t e = 0; e < extent; ++e)
        for (std::size_t i = 0; i < inner; ++i) g[(o * extent + e) * inner + i] += self.grad[o * inner + i];
  });
}

Tensor mean_axis(const Tensor& a, std::size_t axis) {
  const auto extent = a.dim(axis);
  return scale(sum_axis(a, axis), 1.0 / static_cast<double>(extent));
}

Tensor sum_all(const Tensor& a) {
  const auto A = a.data();
  double acc = 0.0;
  for (double x : A) acc += x;
  return make_result({1}, {acc}, {a}, [](Node& self) {
    auto g = self.parents[0]->grad_buffer();
    for (auto& x : g) x += self.grad[0];
  });
}

Tensor select(const Tensor& a, std::size_t index) {
  const auto& s = a.shape();
  if (index >= s[0]) {
    throw DimensionError("select: index " + std::to_string(index) + " out of range for " + shape_str(s));
  }
  const std::size_t stride = a.numel() / s[0];
  const auto A = a.data();
  std::vector<double> out(A.begin() + index * stride, A.begin() + (index + 1) * stride);
  return make_result(drop_axis(s, 0), std::move(out), {a}, [index, stride](Node& self) {
    auto g = self.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < stride; ++i) g[index * stride + i] += self.grad[i];
  });
}

Tensor concat_lastdim(std::span<const Tensor> parts) {
  if (parts.empty()) throw ContractError("concat_lastdim: no inputs");
  const Shape& s0 = parts[0].shape();
  const std::size_t rows = parts[0].numel() / s0.back();
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const auto& p : parts) {
    const auto& s = p.shape();
    if (s.size() != s0.size() || !std::equal(s.begin(), s.end() - 1, s0.begin())) {
      throw DimensionError("concat_lastdim: leading dimensions differ, " + shape_str(s0) + " vs " +
                           shape_str(s));
    }
    widths.push_back(s.back());
    total += s.back();
  }
  std::vector<double> out(rows * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto P = parts[k].data();
    for (std::size_t r = 0; r < rows; ++r)
      std::copy_n(P.begin() + r * widths[k], widths[k], out.begin() + r * total + offset);
    offset += widths[k];
  }
  Shape shape = s0;
  shape.back() = total;
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  return make_result(std::move(shape), std::move(out), std::move(inputs),
                     [rows, total, widths](Node& self) {
                       std::size_t off = 0;
                       for (std::size_t k = 0; k < self.parents.size(); ++k) {
                         Node& p = *self.parents[k];
                         if (p.requires_grad) {
                           auto g = p.grad_buffer();
                           for (std::size_t r = 0; r < rows; ++r)
                             for (std::size_t j = 0; j < widths[k]; ++j)
                               g[r * widths[k] + j] += self.grad[r * total + off + j];
                         }
                         off += widths[k];
                       }
                     });
}

Tensor elementwise_max(std::span<const Tensor> parts) {
  if (parts.empty()) throw ContractError("elementwise_max: empty input list");
  for (const auto& p : parts) require_same_shape("elementwise_max", parts[0], p);
  const std::size_t n = parts[0].numel();
  std::vector<double> out(parts[0].data().begin(), parts[0].data().end());
  std::vector<std::size_t> argmax(n, 0);
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto P = parts[k].data();
    for (std::size_t i = 0; i < n; ++i) {
      if (P[i] > out[i]) {
        out[i] = P[i];
        argmax[i] = k;
      }
    }
  }
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  return make_result(parts[0].shape(), std::move(out), std::move(inputs),
                     [argmax = std::move(argmax)](Node& self) {
                       for (std::size_t i = 0; i < argmax.size(); ++i) {
                         Node& p = *self.parents[argmax[i]];
                         if (p.requires_grad) p.grad_buffer()[i] += self.grad[i];
                       }
                     });
}

Tensor softmax_lastdim(const Tensor& a) {
  const std::size_t n = a.shape().back();
  const std::size_t rows = a.numel() / n;
  const auto A = a.data();
  std::vector<double> out(A.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = A.data() + r * n;
    double* y = out.data() + r * n;
    double mx = x[0];
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(x[j])) throw NumericError("softmax_lastdim: non-finite input");
      mx = std::max(mx, x[j]);
    }
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) z += (y[j] = std::exp(x[j] - mx));
    for (std::size_t j = 0; j < n; ++j) y[j] /= z;
  }
  return make_result(a.shape(), std::move(out), {a}, [rows, n](Node& self) {
    auto g = self.parents[0]->grad_buffer();
    for (std::size_t r = 0; r < rows; ++r) {
      const double* y = self.value.data() + r * n;
      const double* dy = self.grad.data() + r * n;
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += dy[j] * y[j];
      for (std::size_t j = 0; j < n; ++j) g[r * n + j] += y[j] * (dy[j] - dot);
    }
  });
}

Tensor group_norm(const Tensor& a, std::size_t groups, const Tensor& scale_t, const Tensor& shift_t,
                  double eps) {
  require_rank("group_norm", a, 2);
  const std::size_t n = a.dim(0), d = a.dim(1);
  if (groups == 0 || d % groups != 0) {
    throw ConfigError("group_norm: " + std::to_string(d) + " channels not divisible into " +
                      std::to_string(groups) + " groups");
  }
  if (!(eps > 0.0)) throw ConfigError("group_norm: eps must be positive");
  if (scale_t.numel() != d || shift_t.numel() != d) {
    throw DimensionError("group_norm: affine shapes " + shape_str(scale_t.shape()) + ", " +
                         shape_str(shift_t.shape()) + " do not match " + std::to_string(d) + " channels");
  }
  const std::size_t cpg = d / groups;
  const double count = static_cast<double>(n * cpg);
  const auto X = a.data(), G = scale_t.data(), B = shift_t.data();
  std::vector<double> xhat(n * d), inv_std(groups), out(n * d);
  for (std::size_t g = 0; g < groups; ++g) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = g * cpg; c < (g + 1) * cpg; ++c) mean += X[r * d + c];
    mean /= count;
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = g * cpg; c < (g + 1) * cpg; ++c) {
        const double dev = X[r * d + c] - mean;
        var += dev * dev;
      }
    var /= count;
    inv_std[g] = 1.0 / std::sqrt(var + eps);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = g * cpg; c < (g + 1) * cpg; ++c) {
        const std::size_t i = r * d + c;
        xhat[i] = (X[i] - mean) * inv_std[g];
        out[i] = xhat[i] * G[c] + B[c];
      }
  }
  return make_result(
      {n, d}, std::move(out), {a, scale_t, shift_t},
      [n, d, groups, cpg, count, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& self) {
        Node& nx = *self.parents[0];
        Node& ng = *self.parents[1];
        Node& nb = *self.parents[2];
        const double* dy = self.grad.data();
        if (ng.requires_grad) {
          auto gg = ng.grad_buffer();
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < d; ++c) gg[c] += dy[r * d + c] * xhat[r * d + c];
        }
        if (nb.requires_grad) {
          auto gb = nb.grad_buffer();
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < d; ++c) gb[c] += dy[r * d + c];
        }
        if (nx.requires_grad) {
          auto gx = nx.grad_buffer();
          for (std::size_t g = 0; g < groups; ++g) {
            double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
            for (std::size_t r = 0; r < n; ++r)
              for (std::size_t c = g * cpg; c < (g + 1) * cpg; ++c) {
                const std::size_t i = r * d + c;
                const double dxh = dy[i] * ng.value[c];
                sum_dxhat += dxh;
                sum_dxhat_xhat += dxh * xhat[i];
              }
            for (std::size_t r = 0; r < n; ++r)
              for (std::size_t c = g * cpg; c < (g + 1) * cpg; ++c) {
                const std::size_t i = r * d + c;
                const double dxh = dy[i] * ng.value[c];
                gx[i] += inv_std[g] / count * (count * dxh - sum_dxhat - xhat[i] * sum_dxhat_xhat);
              }
          }
        }
      });
}

double bce_with_logits(double logit, int target) {
  const double t = static_cast<double>(target);
  return std::max(logit, 0.0) - logit * t + std::log1p(std::exp(-std::abs(logit)));
}

Tensor masked_bce_with_logits(const Tensor& logits, std::span<const double> targets,
                              std::span<const bool> active) {
  const std::size_t n = logits.numel();
  if (targets.size() != n || active.size() != n) {
    throw DimensionError("masked_bce_with_logits: " + std::to_string(n) + " logits but " +
                         std::to_string(targets.size()) + " targets and " + std::to_string(active.size()) +
                         " mask entries");
  }
  const auto X = logits.data();
  double loss = 0.0;
  std::vector<double> dlogit(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    const double t = targets[i];
    if (t != 0.0 && t != 1.0) throw ContractError("masked_bce_with_logits: target must be 0 or 1");
    const double x = X[i];
    loss += bce_with_logits(x, static_cast<int>(t));
    const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    dlogit[i] = s - t;
  }
  return make_result({1}, {loss}, {logits}, [dlogit = std::move(dlogit)](Node& self) {
    auto g = self.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[0] * dlogit[i];
  });
}

}  // namespace contact::ops
