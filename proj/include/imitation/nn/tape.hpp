// Copyright 2026 The Imitation Game Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "imitation/nn/errors.hpp"
#include "imitation/nn/param.hpp"

namespace imitation::nn {

/// Probabilities fed to a log are clamped into [kProbClamp, 1 - kProbClamp].
inline constexpr double kProbClamp = 1e-7;

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

class Tape;

/// Handle to a vector value recorded on a Tape. Cheap to copy; becomes
/// stale when its tape is cleared.
class Var {
 public:
  Var() = default;
  bool valid() const { return generation_ != 0; }

 private:
  friend class Tape;
  Var(std::uint32_t id, std::uint64_t generation) : id_(id), generation_(generation) {}
  std::uint32_t id_ = 0;
  std::uint64_t generation_ = 0;
};

/// Reverse-mode gradient tape over small dense vectors.
///
/// Every op appends one node holding its output. Parameters are referenced,
/// not copied: backward() adds into ParamTensor::grad directly, so the
/// referenced tensors must outlive the tape and must not be modified between
/// the forward pass and backward(). Repeated backward() calls accumulate.
class Tape {
 public:
  Tape() : generation_(next_generation()) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// Drops every node. Vars issued before the call become stale.
  void clear() {
    nodes_.clear();
    data_.clear();
    lists_.clear();
    grads_.clear();
    generation_ = next_generation();
  }

  // -- leaves -------------------------------------------------------------

  Var constant(std::span<const double> v) {
    const std::uint32_t off = alloc(v.size());
    std::copy(v.begin(), v.end(), data_.begin() + off);
    return finish(Node{Op::Constant, off, size32(v.size())});
  }

  Var zeros(std::size_t n) {
    const std::uint32_t off = alloc(n);
    return finish(Node{Op::Constant, off, size32(n)});
  }

  Var scalar(double x) { return constant(std::span<const double>(&x, 1)); }

  /// Snapshot of a parameter's values; gradients flow back into p.grad.
  Var leaf(ParamTensor& p) {
    const std::uint32_t off = alloc(p.size());
    std::copy(p.values().begin(), p.values().end(), data_.begin() + off);
    Node n{Op::Leaf, off, size32(p.size())};
    n.p0 = &p;
    return finish(n);
  }

  // -- affine ops ---------------------------------------------------------

  /// w * x (+ b when b is non-null).
  Var linear(ParamTensor& w, ParamTensor* b, Var x) {
    check(x);
    if (dim(x) != w.cols()) throw ConfigError("linear: input dimension mismatch");
    if (b != nullptr && b->size() != w.rows()) throw ConfigError("linear: bias length mismatch");
    const std::uint32_t off = alloc(w.rows());
    const double* xv = ptr(x);
    double* y = data_.data() + off;
    const double* wv = w.values().data();
    const std::size_t cols = w.cols();
    for (std::size_t i = 0; i < w.rows(); ++i) {
      double s = b != nullptr ? b->values()[i] : 0.0;
      const double* row = wv + i * cols;
      for (std::size_t j = 0; j < cols; ++j) s += row[j] * xv[j];
      y[i] = s;
    }
    Node n{Op::Linear, off, size32(w.rows())};
    n.a = x.id_;
    n.p0 = &w;
    n.p1 = b;
    return finish(n);
  }

  /// w * x + u * h + b, the fused pre-activation of a recurrent gate.
  Var linear2(ParamTensor& w, Var x, ParamTensor& u, Var h, ParamTensor& b) {
    check(x);
    check(h);
    if (dim(x) != w.cols() || dim(h) != u.cols() || w.rows() != u.rows() ||
        b.size() != w.rows()) {
      throw ConfigError("linear2: dimension mismatch");
    }
    const std::uint32_t off = alloc(w.rows());
    const double* xv = ptr(x);
    const double* hv = ptr(h);
    double* y = data_.data() + off;
    const std::size_t wc = w.cols();
    const std::size_t uc = u.cols();
    for (std::size_t i = 0; i < w.rows(); ++i) {
      double s = b.values()[i];
      const double* wr = w.values().data() + i * wc;
      const double* ur = u.values().data() + i * uc;
      for (std::size_t j = 0; j < wc; ++j) s += wr[j] * xv[j];
      for (std::size_t j = 0; j < uc; ++j) s += ur[j] * hv[j];
      y[i] = s;
    }
    Node n{Op::Linear2, off, size32(w.rows())};
    n.a = x.id_;
    n.b = h.id_;
    n.p0 = &w;
    n.p1 = &u;
    n.p2 = &b;
    return finish(n);
  }

  /// Column `column` of w plus b: a linear map applied to a one-hot vector.
  Var embed(ParamTensor& w, ParamTensor& b, std::size_t column) {
    if (column >= w.cols()) throw InputError("embed: symbol outside the alphabet");
    if (b.size() != w.rows()) throw ConfigError("embed: bias length mismatch");
    const std::uint32_t off = alloc(w.rows());
    double* y = data_.data() + off;
    for (std::size_t i = 0; i < w.rows(); ++i) y[i] = w(i, column) + b.values()[i];
    Node n{Op::Embed, off, size32(w.rows())};
    n.p0 = &w;
    n.p1 = &b;
    n.aux = static_cast<double>(column);
    return finish(n);
  }

  /// v . x with v a parameter vector; returns a scalar.
  Var dot_param(ParamTensor& v, Var x) {
    check(x);
    if (dim(x) != v.size()) throw ConfigError("dot_param: dimension mismatch");
    const std::uint32_t off = alloc(1);
    const double* xv = ptr(x);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v.values()[i] * xv[i];
    data_[off] = s;
    Node n{Op::DotParam, off, 1};
    n.a = x.id_;
    n.p0 = &v;
    return finish(n);
  }

  // -- elementwise ops ----------------------------------------------------

  Var add(Var a, Var b) { return binary(Op::Add, a, b); }
  Var mul(Var a, Var b) { return binary(Op::Mul, a, b); }

  Var sigmoid(Var a) {
    check(a);
    const std::uint32_t off = alloc(dim(a));
    const double* x = ptr(a);
    for (std::size_t i = 0; i < dim(a); ++i) data_[off + i] = nn::sigmoid(x[i]);
    Node n{Op::Sigmoid, off, size32(dim(a))};
    n.a = a.id_;
    return finish(n);
  }

  Var tanh(Var a) {
    check(a);
    const std::uint32_t off = alloc(dim(a));
    const double* x = ptr(a);
    for (std::size_t i = 0; i < dim(a); ++i) data_[off + i] = std::tanh(x[i]);
    Node n{Op::Tanh, off, size32(dim(a))};
    n.a = a.id_;
    return finish(n);
  }

  /// (1 - z) * a + z * b, elementwise.
  Var lerp(Var z, Var a, Var b) {
    check(z);
    check(a);
    check(b);
    const std::size_t d = dim(z);
    if (dim(a) != d || dim(b) != d) throw ConfigError("lerp: dimension mismatch");
    const std::uint32_t off = alloc(d);
    const double* zv = ptr(z);
    const double* av = ptr(a);
    const double* bv = ptr(b);
    for (std::size_t i = 0; i < d; ++i) data_[off + i] = (1.0 - zv[i]) * av[i] + zv[i] * bv[i];
    Node n{Op::Lerp, off, size32(d)};
    n.a = z.id_;
    n.b = a.id_;
    n.c = b.id_;
    return finish(n);
  }

  Var scale(Var a, double factor) {
    check(a);
    const std::uint32_t off = alloc(dim(a));
    const double* x = ptr(a);
    for (std::size_t i = 0; i < dim(a); ++i) data_[off + i] = factor * x[i];
    Node n{Op::Scale, off, size32(dim(a))};
    n.a = a.id_;
    n.aux = factor;
    return finish(n);
  }

  // -- shape ops ----------------------------------------------------------

  Var concat(Var a, Var b) {
    check(a);
    check(b);
    const std::size_t da = dim(a);
    const std::size_t db = dim(b);
    const std::uint32_t off = alloc(da + db);
    std::copy_n(ptr(a), da, data_.begin() + off);
    std::copy_n(ptr(b), db, data_.begin() + off + da);
    Node n{Op::Concat, off, size32(da + db)};
    n.a = a.id_;
    n.b = b.id_;
    return finish(n);
  }

  /// Packs scalar vars into one vector.
  Var stack(std::span<const Var> scalars) {
    if (scalars.empty()) throw std::logic_error("stack: no inputs");
    const std::uint32_t list = push_list(scalars, true);
    const std::uint32_t off = alloc(scalars.size());
    for (std::size_t i = 0; i < scalars.size(); ++i) data_[off + i] = *ptr(scalars[i]);
    Node n{Op::Stack, off, size32(scalars.size())};
    n.list_off = list;
    n.list_n = size32(scalars.size());
    return finish(n);
  }

  Var pick(Var a, std::size_t index) {
    check(a);
    if (index >= dim(a)) throw std::out_of_range("pick: index out of range");
    const std::uint32_t off = alloc(1);
    data_[off] = ptr(a)[index];
    Node n{Op::Pick, off, 1};
    n.a = a.id_;
    n.aux = static_cast<double>(index);
    return finish(n);
  }

  // -- reductions ---------------------------------------------------------

  Var dot(Var a, Var b) {
    check(a);
    check(b);
    if (dim(a) != dim(b)) throw ConfigError("dot: dimension mismatch");
    const std::uint32_t off = alloc(1);
    const double* av = ptr(a);
    const double* bv = ptr(b);
    double s = 0.0;
    for (std::size_t i = 0; i < dim(a); ++i) s += av[i] * bv[i];
    data_[off] = s;
    Node n{Op::Dot, off, 1};
    n.a = a.id_;
    n.b = b.id_;
    return finish(n);
  }

  /// Sum of scalar vars.
  Var sum(std::span<const Var> scalars) {
    const std::uint32_t list = push_list(scalars, true);
    const std::uint32_t off = alloc(1);
    double s = 0.0;
    for (const Var& v : scalars) s += *ptr(v);
    data_[off] = s;
    Node n{Op::Sum, off, 1};
    n.list_off = list;
    n.list_n = size32(scalars.size());
    return finish(n);
  }

  /// Sum_i weights[i] * items[i]; all items share one dimension.
  Var weighted_sum(Var weights, std::span<const Var> items) {
    check(weights);
    if (items.empty() || dim(weights) != items.size()) {
      throw ConfigError("weighted_sum: weight count must equal item count");
    }
    const std::uint32_t list = push_list(items, false);
    const std::size_t d = dim(items.front());
    for (const Var& v : items) {
      if (dim(v) != d) throw ConfigError("weighted_sum: items differ in dimension");
    }
    const std::uint32_t off = alloc(d);
    const double* w = ptr(weights);
    for (std::size_t k = 0; k < items.size(); ++k) {
      const double* iv = ptr(items[k]);
      for (std::size_t i = 0; i < d; ++i) data_[off + i] += w[k] * iv[i];
    }
    Node n{Op::WeightedSum, off, size32(d)};
    n.a = weights.id_;
    n.list_off = list;
    n.list_n = size32(items.size());
    return finish(n);
  }

  // -- probability heads --------------------------------------------------

  Var softmax(Var a) {
    check(a);
    const std::size_t d = dim(a);
    const std::uint32_t off = alloc(d);
    const double* x = ptr(a);
    const double mx = *std::max_element(x, x + d);
    double z = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      data_[off + i] = std::exp(x[i] - mx);
      z += data_[off + i];
    }
    for (std::size_t i = 0; i < d; ++i) data_[off + i] /= z;
    Node n{Op::Softmax, off, size32(d)};
    n.a = a.id_;
    return finish(n);
  }

  /// Binary cross entropy of a scalar probability against a 0/1 target.
  /// The probability is clamped into [kProbClamp, 1 - kProbClamp]; the
  /// gradient is zero where the clamp is active.
  Var bce(Var prob, double target) {
    check(prob);
    if (dim(prob) != 1) throw ConfigError("bce: expects a scalar probability");
    if (target != 0.0 && target != 1.0) throw InputError("bce: target must be 0 or 1");
    const double x = std::clamp(*ptr(prob), kProbClamp, 1.0 - kProbClamp);
    const std::uint32_t off = alloc(1);
    data_[off] = -(target * std::log(x) + (1.0 - target) * std::log(1.0 - x));
    Node n{Op::Bce, off, 1};
    n.a = prob.id_;
    n.aux = target;
    return finish(n);
  }

  // -- access -------------------------------------------------------------

  std::span<const double> value(Var v) const {
    check(v);
    const Node& n = nodes_[v.id_];
    return {data_.data() + n.off, n.n};
  }

  double scalar_value(Var v) const {
    auto s = value(v);
    if (s.size() != 1) throw std::logic_error("scalar_value: var is not a scalar");
    return s[0];
  }

  std::size_t dim(Var v) const { return nodes_[v.id_].n; }

  /// Gradient of the most recent backward() target with respect to v.
  std::span<const double> grad(Var v) const {
    check(v);
    if (grads_.size() < data_.size()) throw std::logic_error("grad: backward() has not run");
    const Node& n = nodes_[v.id_];
    return {grads_.data() + n.off, n.n};
  }

  /// Propagates d(loss)/d(.) to every node recorded before `loss` and adds
  /// the parameter gradients into the referenced ParamTensors.
  void backward(Var loss) {
    if (nodes_.empty() || loss.generation_ != generation_) {
      throw std::logic_error("backward: var does not belong to the live tape");
    }
    if (dim(loss) != 1) throw std::logic_error("backward: loss must be a scalar");
    grads_.assign(data_.size(), 0.0);
    grads_[nodes_[loss.id_].off] = 1.0;
    for (std::uint32_t id = loss.id_ + 1; id-- > 0;) backprop(nodes_[id]);
  }

 private:
  enum class Op : std::uint8_t {
    Constant, Leaf, Linear, Linear2, Embed, DotParam, Add, Mul, Sigmoid, Tanh, Lerp,
    Scale, Concat, Stack, Pick, Dot, Sum, WeightedSum, Softmax, Bce,
  };

  struct Node {
    Op op;
    std::uint32_t off;
    std::uint32_t n;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t c = 0;
    std::uint32_t list_off = 0;
    std::uint32_t list_n = 0;
    ParamTensor* p0 = nullptr;
    ParamTensor* p1 = nullptr;
    ParamTensor* p2 = nullptr;
    double aux = 0.0;
  };

  static std::uint64_t next_generation() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
  }

  static std::uint32_t size32(std::size_t n) { return static_cast<std::uint32_t>(n); }

  void check(Var v) const {
    if (v.generation_ != generation_ || v.id_ >= nodes_.size()) {
      throw std::logic_error("stale or foreign tape variable");
    }
  }

  std::uint32_t alloc(std::size_t n) {
    const std::size_t off = data_.size();
    data_.resize(off + n, 0.0);
    return size32(off);
  }

  std::uint32_t push_list(std::span<const Var> vars, bool scalars) {
    const std::size_t off = lists_.size();
    for (const Var& v : vars) {
      check(v);
      if (scalars && dim(v) != 1) throw ConfigError("expected scalar inputs");
      lists_.push_back(v.id_);
    }
    return size32(off);
  }

  const double* ptr(Var v) const { return data_.data() + nodes_[v.id_].off; }

  Var finish(const Node& n) {
    require_finite(std::span<const double>(data_.data() + n.off, n.n), "tape op output");
    nodes_.push_back(n);
    return Var(size32(nodes_.size() - 1), generation_);
  }

  Var binary(Op op, Var a, Var b) {
    check(a);
    check(b);
    const std::size_t d = dim(a);
    if (dim(b) != d) throw ConfigError("elementwise op: dimension mismatch");
    const std::uint32_t off = alloc(d);
    const double* av = ptr(a);
    const double* bv = ptr(b);
    for (std::size_t i = 0; i < d; ++i) {
      data_[off + i] = op == Op::Add ? av[i] + bv[i] : av[i] * bv[i];
    }
    Node n{op, off, size32(d)};
    n.a = a.id_;
    n.b = b.id_;
    return finish(n);
  }

  void backprop(const Node& n) {
    const double* g = grads_.data() + n.off;
    const double* y = data_.data() + n.off;
    auto in_val = [&](std::uint32_t id) { return data_.data() + nodes_[id].off; };
    auto in_grad = [&](std::uint32_t id) { return grads_.data() + nodes_[id].off; };
    switch (n.op) {
      case Op::Constant:
        break;
      case Op::Leaf: {
        auto pg = n.p0->grad();
        for (std::size_t i = 0; i < n.n; ++i) pg[i] += g[i];
        break;
      }
      case Op::Linear: {
        const double* x = in_val(n.a);
        double* gx = in_grad(n.a);
        const std::size_t cols = n.p0->cols();
        const double* w = n.p0->values().data();
        double* gw = n.p0->grad().data();
        for (std::size_t i = 0; i < n.n; ++i) {
          const double gi = g[i];
          if (n.p1 != nullptr) n.p1->grad()[i] += gi;
          for (std::size_t j = 0; j < cols; ++j) {
            gw[i * cols + j] += gi * x[j];
            gx[j] += w[i * cols + j] * gi;
          }
        }
        break;
      }
      case Op::Linear2: {
        const double* x = in_val(n.a);
        const double* h = in_val(n.b);
        double* gx = in_grad(n.a);
        double* gh = in_grad(n.b);
        const std::size_t wc = n.p0->cols();
        const std::size_t uc = n.p1->cols();
        const double* w = n.p0->values().data();
        const double* u = n.p1->values().data();
        double* gw = n.p0->grad().data();
        double* gu = n.p1->grad().data();
        double* gb = n.p2->grad().data();
        for (std::size_t i = 0; i < n.n; ++i) {
          const double gi = g[i];
          gb[i] += gi;
          for (std::size_t j = 0; j < wc; ++j) {
            gw[i * wc + j] += gi * x[j];
            gx[j] += w[i * wc + j] * gi;
          }
          for (std::size_t j = 0; j < uc; ++j) {
            gu[i * uc + j] += gi * h[j];
            gh[j] += u[i * uc + j] * gi;
          }
        }
        break;
      }
      case Op::Embed: {
        const auto column = static_cast<std::size_t>(n.aux);
        const std::size_t cols = n.p0->cols();
        double* gw = n.p0->grad().data();
        double* gb = n.p1->grad().data();
        for (std::size_t i = 0; i < n.n; ++i) {
          gw[i * cols + column] += g[i];
          gb[i] += g[i];
        }
        break;
      }
      case Op::DotParam: {
        const double* x = in_val(n.a);
        double* gx = in_grad(n.a);
        const double* v = n.p0->values().data();
        double* gv = n.p0->grad().data();
        for (std::size_t i = 0; i < n.p0->size(); ++i) {
          gv[i] += g[0] * x[i];
          gx[i] += g[0] * v[i];
        }
        break;
      }
      case Op::Add: {
        double* ga = in_grad(n.a);
        double* gb = in_grad(n.b);
        for (std::size_t i = 0; i < n.n; ++i) {
          ga[i] += g[i];
          gb[i] += g[i];
        }
        break;
      }
      case Op::Mul: {
        const double* a = in_val(n.a);
        const double* b = in_val(n.b);
        double* ga = in_grad(n.a);
        double* gb = in_grad(n.b);
        for (std::size_t i = 0; i < n.n; ++i) {
          ga[i] += g[i] * b[i];
          gb[i] += g[i] * a[i];
        }
        break;
      }
      case Op::Sigmoid: {
        double* ga = in_grad(n.a);
        for (std::size_t i = 0; i < n.n; ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case Op::Tanh: {
        double* ga = in_grad(n.a);
        for (std::size_t i = 0; i < n.n; ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
        break;
      }
      case Op::Lerp: {
        const double* z = in_val(n.a);
        const double* a = in_val(n.b);
        const double* b = in_val(n.c);
        double* gz = in_grad(n.a);
        double* ga = in_grad(n.b);
        double* gb = in_grad(n.c);
        for (std::size_t i = 0; i < n.n; ++i) {
          gz[i] += g[i] * (b[i] - a[i]);
          ga[i] += g[i] * (1.0 - z[i]);
          gb[i] += g[i] * z[i];
        }
        break;
      }
      case Op::Scale: {
        double* ga = in_grad(n.a);
        for (std::size_t i = 0; i < n.n; ++i) ga[i] += g[i] * n.aux;
        break;
      }
      case Op::Concat: {
        const std::uint32_t da = nodes_[n.a].n;
        double* ga = in_grad(n.a);
        double* gb = in_grad(n.b);
        for (std::size_t i = 0; i < da; ++i) ga[i] += g[i];
        for (std::size_t i = da; i < n.n; ++i) gb[i - da] += g[i];
        break;
      }
      case Op::Stack: {
        for (std::size_t k = 0; k < n.list_n; ++k) *in_grad(lists_[n.list_off + k]) += g[k];
        break;
      }
      case Op::Pick: {
        in_grad(n.a)[static_cast<std::size_t>(n.aux)] += g[0];
        break;
      }
      case Op::Dot: {
        const double* a = in_val(n.a);
        const double* b = in_val(n.b);
        double* ga = in_grad(n.a);
        double* gb = in_grad(n.b);
        for (std::size_t i = 0; i < nodes_[n.a].n; ++i) {
          ga[i] += g[0] * b[i];
          gb[i] += g[0] * a[i];
        }
        break;
      }
      case Op::Sum: {
        for (std::size_t k = 0; k < n.list_n; ++k) *in_grad(lists_[n.list_off + k]) += g[0];
        break;
      }
      case Op::WeightedSum: {
        const double* w = in_val(n.a);
        double* gw = in_grad(n.a);
        for (std::size_t k = 0; k < n.list_n; ++k) {
          const std::uint32_t id = lists_[n.list_off + k];
          const double* item = in_val(id);
          double* gi = in_grad(id);
          double acc = 0.0;
          for (std::size_t i = 0; i < n.n; ++i) {
            acc += g[i] * item[i];
            gi[i] += w[k] * g[i];
          }
          gw[k] += acc;
        }
        break;
      }
      case Op::Softmax: {
        double gy = 0.0;
        for (std::size_t i = 0; i < n.n; ++i) gy += g[i] * y[i];
        double* ga = in_grad(n.a);
        for (std::size_t i = 0; i < n.n; ++i) ga[i] += y[i] * (g[i] - gy);
        break;
      }
      case Op::Bce: {
        const double x = *in_val(n.a);
        if (x > kProbClamp && x < 1.0 - kProbClamp) {
          const double t = n.aux;
          *in_grad(n.a) += g[0] * (-t / x + (1.0 - t) / (1.0 - x));
        }
        break;
      }
    }
  }

  std::vector<Node> nodes_;
  std::vector<double> data_;
  std::vector<double> grads_;
  std::vector<std::uint32_t> lists_;
  std::uint64_t generation_;
};

}  // namespace imitation::nn
