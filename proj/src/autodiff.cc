/*
 * Copyright 2026 The KnowDDI Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "knowddi/autodiff.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "knowddi/errors.h"

namespace knowddi {

const Tensor& Var::value() const { return tape_->value(id_); }
const Tensor& Var::grad() const { return tape_->grad(id_); }

Var Tape::Constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), Tensor(), false, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::Variable(Tensor value) {
  nodes_.push_back(Node{std::move(value), Tensor(), true, nullptr});
  return Var(this, nodes_.size() - 1);
}

void Tape::CheckOwned(Var v) const {
  if (v.tape_ != this || v.id_ >= nodes_.size()) {
    throw ShapeError("Var does not belong to this tape");
  }
}

Var Tape::Record(Tensor value, std::initializer_list<Var> inputs,
                 BackwardFn backward) {
  return Record(std::move(value),
                std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(backward));
}

Var Tape::Record(Tensor value, std::span<const Var> inputs,
                 BackwardFn backward) {
  bool tracked = false;
  for (Var in : inputs) {
    CheckOwned(in);
    tracked = tracked || nodes_[in.id_].requires_grad;
  }
  nodes_.push_back(Node{std::move(value), Tensor(), tracked,
                        tracked ? std::move(backward) : nullptr});
  return Var(this, nodes_.size() - 1);
}

Tensor* Tape::GradBuffer(size_t id) {
  Node& node = nodes_[id];
  if (!node.requires_grad) return nullptr;
  if (node.grad.empty() && !node.value.empty()) {
    node.grad = Tensor::ZerosLike(node.value);
  } else if (node.grad.empty()) {
    node.grad = Tensor(node.value.rows(), node.value.cols());
  }
  return &node.grad;
}

void Tape::Backward(Var loss) {
  CheckOwned(loss);
  if (loss.value().size() != 1) {
    throw ShapeError("Backward(loss) requires a scalar loss");
  }
  Backward(loss, Tensor::Scalar(1.0));
}

void Tape::Backward(Var output, const Tensor& seed) {
  CheckOwned(output);
  if (!seed.SameShape(output.value())) {
    throw ShapeError("Backward seed shape does not match output");
  }
  Tensor* out = GradBuffer(output.id_);
  if (out == nullptr) return;
  out->AddInPlace(seed);
  for (size_t i = output.id_ + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!node.backward || node.grad.empty()) continue;
    node.backward(*this, node.value, node.grad);
  }
}

namespace {

std::string ShapeString(const Tensor& t) {
  std::ostringstream s;
  s << t.rows() << "x" << t.cols();
  return s.str();
}

[[noreturn]] void ShapeFail(const char* op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + ShapeString(a) +
                   " and " + ShapeString(b));
}

// True when b is broadcast as a row over a.
bool CheckBroadcast(const char* op, const Tensor& a, const Tensor& b) {
  if (a.SameShape(b)) return false;
  if (b.rows() == 1 && b.cols() == a.cols()) return true;
  ShapeFail(op, a, b);
}

void Accumulate(Tape& tape, Var v, const Tensor& delta) {
  if (Tensor* g = tape.GradBuffer(v.id())) g->AddInPlace(delta);
}

// Reduces a gradient shaped like `a` onto a row-broadcast operand.
Tensor ReduceRows(const Tensor& g) {
  Tensor out(1, g.cols());
  for (size_t r = 0; r < g.rows(); ++r) {
    for (size_t c = 0; c < g.cols(); ++c) out[c] += g(r, c);
  }
  return out;
}

template <typename Fn>
Tensor Elementwise(const Tensor& a, const Tensor& b, bool broadcast, Fn fn) {
  Tensor out(a.rows(), a.cols());
  for (size_t r = 0; r < a.rows(); ++r) {
    for (size_t c = 0; c < a.cols(); ++c) {
      out(r, c) = fn(a(r, c), broadcast ? b[c] : b(r, c));
    }
  }
  return out;
}

template <typename Fn>
Tensor Map(const Tensor& x, Fn fn) {
  Tensor out(x.rows(), x.cols());
  for (size_t i = 0; i < x.size(); ++i) out[i] = fn(x[i]);
  return out;
}

}  // namespace

Var MatMul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.cols() != bv.rows()) ShapeFail("MatMul", av, bv);
  const size_t n = av.rows(), k = av.cols(), m = bv.cols();
  Tensor out(n, m);
  for (size_t i = 0; i < n; ++i) {
    double* orow = out.row(i).data();
    for (size_t p = 0; p < k; ++p) {
      const double aip = av(i, p);
      if (aip == 0.0) continue;
      const double* brow = bv.row(p).data();
      for (size_t j = 0; j < m; ++j) orow[j] += aip * brow[j];
    }
  }
  return a.tape()->Record(
      std::move(out), {a, b},
      [a, b](Tape& tape, const Tensor&, const Tensor& g) {
        const Tensor& av = tape.value(a.id());
        const Tensor& bv = tape.value(b.id());
        const size_t n = av.rows(), k = av.cols(), m = bv.cols();
        if (Tensor* ga = tape.GradBuffer(a.id())) {
          for (size_t i = 0; i < n; ++i) {
            const double* grow = g.row(i).data();
            for (size_t p = 0; p < k; ++p) {
              const double* brow = bv.row(p).data();
              double s = 0.0;
              for (size_t j = 0; j < m; ++j) s += grow[j] * brow[j];
              (*ga)(i, p) += s;
            }
          }
        }
        if (Tensor* gb = tape.GradBuffer(b.id())) {
          for (size_t i = 0; i < n; ++i) {
            const double* grow = g.row(i).data();
            for (size_t p = 0; p < k; ++p) {
              const double aip = av(i, p);
              if (aip == 0.0) continue;
              double* gbrow = gb->row(p).data();
              for (size_t j = 0; j < m; ++j) gbrow[j] += aip * grow[j];
            }
          }
        }
      });
}

Var Add(Var a, Var b) {
  const bool bc = CheckBroadcast("Add", a.value(), b.value());
  Tensor out = Elementwise(a.value(), b.value(), bc,
                           [](double x, double y) { return x + y; });
  return a.tape()->Record(std::move(out), {a, b},
                          [a, b, bc](Tape& tape, const Tensor&, const Tensor& g) {
                            Accumulate(tape, a, g);
                            Accumulate(tape, b, bc ? ReduceRows(g) : g);
                          });
}

Var Sub(Var a, Var b) {
  const bool bc = CheckBroadcast("Sub", a.value(), b.value());
  Tensor out = Elementwise(a.value(), b.value(), bc,
                           [](double x, double y) { return x - y; });
  return a.tape()->Record(
      std::move(out), {a, b},
      [a, b, bc](Tape& tape, const Tensor&, const Tensor& g) {
        Accumulate(tape, a, g);
        Tensor neg = Map(bc ? ReduceRows(g) : g, [](double x) { return -x; });
        Accumulate(tape, b, neg);
      });
}

Var Mul(Var a, Var b) {
  const bool bc = CheckBroadcast("Mul", a.value(), b.value());
  Tensor out = Elementwise(a.value(), b.value(), bc,
                           [](double x, double y) { return x * y; });
  return a.tape()->Record(
      std::move(out), {a, b},
      [a, b, bc](Tape& tape, const Tensor&, const Tensor& g) {
        const Tensor& av = tape.value(a.id());
        const Tensor& bv = tape.value(b.id());
        if (tape.requires_grad(a.id())) {
          Accumulate(tape, a, Elementwise(g, bv, bc, [](double x, double y) {
                       return x * y;
                     }));
        }
        if (tape.requires_grad(b.id())) {
          Tensor gb = Elementwise(g, av, false,
                                  [](double x, double y) { return x * y; });
          Accumulate(tape, b, bc ? ReduceRows(gb) : gb);
        }
      });
}

Var Scale(Var a, double factor) {
  Tensor out = Map(a.value(), [factor](double x) { return factor * x; });
  return a.tape()->Record(std::move(out), {a},
                          [a, factor](Tape& tape, const Tensor&, const Tensor& g) {
                            Accumulate(tape, a, Map(g, [factor](double x) {
                                         return factor * x;
                                       }));
                          });
}

Var AddScalar(Var a, double offset) {
  Tensor out = Map(a.value(), [offset](double x) { return x + offset; });
  return a.tape()->Record(
      std::move(out), {a},
      [a](Tape& tape, const Tensor&, const Tensor& g) { Accumulate(tape, a, g); });
}

Var Relu(Var x) {
  Tensor out = Map(x.value(), [](double v) { return v > 0.0 ? v : 0.0; });
  return x.tape()->Record(
      std::move(out), {x}, [x](Tape& tape, const Tensor& y, const Tensor& g) {
        Tensor d(g.rows(), g.cols());
        for (size_t i = 0; i < g.size(); ++i) d[i] = y[i] > 0.0 ? g[i] : 0.0;
        Accumulate(tape, x, d);
      });
}

Var Exp(Var x) {
  Tensor out = Map(x.value(), [](double v) { return std::exp(v); });
  return x.tape()->Record(
      std::move(out), {x}, [x](Tape& tape, const Tensor& y, const Tensor& g) {
        Tensor d(g.rows(), g.cols());
        for (size_t i = 0; i < g.size(); ++i) d[i] = g[i] * y[i];
        Accumulate(tape, x, d);
      });
}

Var Sigmoid(Var x) {
  Tensor out = Map(x.value(), [](double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  });
  return x.tape()->Record(
      std::move(out), {x}, [x](Tape& tape, const Tensor& y, const Tensor& g) {
        Tensor d(g.rows(), g.cols());
        for (size_t i = 0; i < g.size(); ++i) d[i] = g[i] * y[i] * (1.0 - y[i]);
        Accumulate(tape, x, d);
      });
}

Var Log(Var x, double floor) {
  const Tensor& xv = x.value();
  Tensor out(xv.rows(), xv.cols());
  for (size_t i = 0; i < xv.size(); ++i) {
    if (floor <= 0.0 && !(xv[i] > 0.0)) {
      throw NumericalError("Log: non-positive input " + std::to_string(xv[i]));
    }
    out[i] = std::log(std::max(xv[i], floor));
  }
  return x.tape()->Record(
      std::move(out), {x}, [x, floor](Tape& tape, const Tensor&, const Tensor& g) {
        const Tensor& xv = tape.value(x.id());
        Tensor d(g.rows(), g.cols());
        for (size_t i = 0; i < g.size(); ++i) {
          d[i] = xv[i] > floor ? g[i] / xv[i] : 0.0;
        }
        Accumulate(tape, x, d);
      });
}

Var NegAbsDiff(Var a, Var b) {
  if (!a.value().SameShape(b.value())) ShapeFail("NegAbsDiff", a.value(), b.value());
  Tensor out = Elementwise(a.value(), b.value(), false, [](double x, double y) {
    return std::exp(-std::abs(x - y));
  });
  return a.tape()->Record(
      std::move(out), {a, b},
      [a, b](Tape& tape, const Tensor& y, const Tensor& g) {
        const Tensor& av = tape.value(a.id());
        const Tensor& bv = tape.value(b.id());
        // d/da exp(-|a-b|) = -sign(a-b) * y; sign(0) = 0.
        Tensor da(g.rows(), g.cols());
        for (size_t i = 0; i < g.size(); ++i) {
          const double diff = av[i] - bv[i];
          const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
          da[i] = -sign * y[i] * g[i];
        }
        if (tape.requires_grad(b.id())) {
          Accumulate(tape, b, Map(da, [](double v) { return -v; }));
        }
        Accumulate(tape, a, da);
      });
}

Var ConcatCols(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("ConcatCols: no inputs");
  const size_t rows = parts[0].value().rows();
  size_t cols = 0;
  for (Var p : parts) {
    if (p.value().rows() != rows) ShapeFail("ConcatCols", parts[0].value(), p.value());
    cols += p.value().cols();
  }
  Tensor out(rows, cols);
  size_t offset = 0;
  for (Var p : parts) {
    const Tensor& v = p.value();
    for (size_t r = 0; r < rows; ++r) {
      for (size_t c = 0; c < v.cols(); ++c) out(r, offset + c) = v(r, c);
    }
    offset += v.cols();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return parts[0].tape()->Record(
      std::move(out), parts,
      [inputs](Tape& tape, const Tensor&, const Tensor& g) {
        size_t offset = 0;
        for (Var p : inputs) {
          const size_t pc = tape.value(p.id()).cols();
          if (Tensor* gp = tape.GradBuffer(p.id())) {
            for (size_t r = 0; r < g.rows(); ++r) {
              for (size_t c = 0; c < pc; ++c) (*gp)(r, c) += g(r, offset + c);
            }
          }
          offset += pc;
        }
      });
}

Var ConcatRows(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("ConcatRows: no inputs");
  const size_t cols = parts[0].value().cols();
  size_t rows = 0;
  for (Var p : parts) {
    if (p.value().cols() != cols) ShapeFail("ConcatRows", parts[0].value(), p.value());
    rows += p.value().rows();
  }
  std::vector<double> values;
  values.reserve(rows * cols);
  for (Var p : parts) {
    const auto v = p.value().values();
    values.insert(values.end(), v.begin(), v.end());
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return parts[0].tape()->Record(
      Tensor(rows, cols, std::move(values)), parts,
      [inputs](Tape& tape, const Tensor&, const Tensor& g) {
        size_t offset = 0;
        for (Var p : inputs) {
          const size_t n = tape.value(p.id()).size();
          if (Tensor* gp = tape.GradBuffer(p.id())) {
            for (size_t i = 0; i < n; ++i) (*gp)[i] += g[offset + i];
          }
          offset += n;
        }
      });
}

Var MeanRows(Var x) {
  const Tensor& xv = x.value();
  Tensor out(1, xv.cols());
  if (xv.rows() > 0) {
    for (size_t r = 0; r < xv.rows(); ++r) {
      for (size_t c = 0; c < xv.cols(); ++c) out[c] += xv(r, c);
    }
    for (size_t c = 0; c < xv.cols(); ++c) out[c] /= static_cast<double>(xv.rows());
  }
  return x.tape()->Record(
      std::move(out), {x}, [x](Tape& tape, const Tensor&, const Tensor& g) {
        Tensor* gx = tape.GradBuffer(x.id());
        const size_t rows = gx->rows();
        if (rows == 0) return;
        const double inv = 1.0 / static_cast<double>(rows);
        for (size_t r = 0; r < rows; ++r) {
          for (size_t c = 0; c < gx->cols(); ++c) (*gx)(r, c) += g[c] * inv;
        }
      });
}

Var Sum(Var x) {
  double s = 0.0;
  for (double v : x.value().values()) s += v;
  return x.tape()->Record(
      Tensor::Scalar(s), {x}, [x](Tape& tape, const Tensor&, const Tensor& g) {
        Tensor* gx = tape.GradBuffer(x.id());
        const double seed = g[0];
        for (double& v : gx->values()) v += seed;
      });
}

Var GroupedSoftmax(Var scores, std::span<const uint32_t> groups,
                   size_t num_groups) {
  const Tensor& sv = scores.value();
  if (groups.size() != sv.size()) {
    throw ShapeError("GroupedSoftmax: group list length " +
                     std::to_string(groups.size()) + " != " +
                     std::to_string(sv.size()) + " scores");
  }
  std::vector<double> max(num_groups, -std::numeric_limits<double>::infinity());
  for (size_t i = 0; i < sv.size(); ++i) {
    if (groups[i] >= num_groups) throw ShapeError("GroupedSoftmax: group id out of range");
    max[groups[i]] = std::max(max[groups[i]], sv[i]);
  }
  std::vector<double> denom(num_groups, 0.0);
  Tensor out(sv.rows(), sv.cols());
  for (size_t i = 0; i < sv.size(); ++i) {
    out[i] = std::exp(sv[i] - max[groups[i]]);
    denom[groups[i]] += out[i];
  }
  for (size_t i = 0; i < sv.size(); ++i) out[i] /= denom[groups[i]];
  std::vector<uint32_t> group_ids(groups.begin(), groups.end());
  return scores.tape()->Record(
      std::move(out), {scores},
      [scores, group_ids = std::move(group_ids), num_groups](
          Tape& tape, const Tensor& y, const Tensor& g) {
        std::vector<double> dot(num_groups, 0.0);
        for (size_t i = 0; i < y.size(); ++i) dot[group_ids[i]] += y[i] * g[i];
        Tensor d(y.rows(), y.cols());
        for (size_t i = 0; i < y.size(); ++i) {
          d[i] = y[i] * (g[i] - dot[group_ids[i]]);
        }
        Accumulate(tape, scores, d);
      });
}

Var SoftmaxRows(Var x) {
  const Tensor& xv = x.value();
  std::vector<uint32_t> groups(xv.size());
  for (size_t i = 0; i < xv.size(); ++i) {
    groups[i] = static_cast<uint32_t>(i / xv.cols());
  }
  return GroupedSoftmax(x, groups, xv.rows());
}

Var GatherRows(Var x, std::span<const uint32_t> indices) {
  const Tensor& xv = x.value();
  Tensor out(indices.size(), xv.cols());
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= xv.rows()) throw ShapeError("GatherRows: index out of range");
    const auto src = xv.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  std::vector<uint32_t> idx(indices.begin(), indices.end());
  return x.tape()->Record(
      std::move(out), {x},
      [x, idx = std::move(idx)](Tape& tape, const Tensor&, const Tensor& g) {
        Tensor* gx = tape.GradBuffer(x.id());
        for (size_t i = 0; i < idx.size(); ++i) {
          auto dst = gx->row(idx[i]);
          const auto src = g.row(i);
          for (size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
        }
      });
}

Var ScatterMean(Var x, std::span<const uint32_t> src,
                std::span<const uint32_t> dst, size_t num_rows) {
  const Tensor& xv = x.value();
  if (src.size() != dst.size()) throw ShapeError("ScatterMean: src/dst length mismatch");
  std::vector<double> count(num_rows, 0.0);
  Tensor out(num_rows, xv.cols());
  for (size_t i = 0; i < src.size(); ++i) {
    if (src[i] >= xv.rows() || dst[i] >= num_rows) {
      throw ShapeError("ScatterMean: index out of range");
    }
    count[dst[i]] += 1.0;
    auto o = out.row(dst[i]);
    const auto s = xv.row(src[i]);
    for (size_t c = 0; c < s.size(); ++c) o[c] += s[c];
  }
  for (size_t r = 0; r < num_rows; ++r) {
    if (count[r] == 0.0) continue;
    for (double& v : out.row(r)) v /= count[r];
  }
  std::vector<uint32_t> s(src.begin(), src.end()), d(dst.begin(), dst.end());
  return x.tape()->Record(
      std::move(out), {x},
      [x, s = std::move(s), d = std::move(d), count = std::move(count)](
          Tape& tape, const Tensor&, const Tensor& g) {
        Tensor* gx = tape.GradBuffer(x.id());
        for (size_t i = 0; i < s.size(); ++i) {
          auto gr = gx->row(s[i]);
          const auto go = g.row(d[i]);
          const double inv = 1.0 / count[d[i]];
          for (size_t c = 0; c < gr.size(); ++c) gr[c] += go[c] * inv;
        }
      });
}

Var WeightedScatterSum(Var weights, Var x, std::span<const uint32_t> src,
                       std::span<const uint32_t> dst, size_t num_rows) {
  const Tensor& wv = weights.value();
  const Tensor& xv = x.value();
  if (src.size() != dst.size() || wv.size() != src.size()) {
    throw ShapeError("WeightedScatterSum: weights/src/dst length mismatch");
  }
  Tensor out(num_rows, xv.cols());
  for (size_t i = 0; i < src.size(); ++i) {
    if (src[i] >= xv.rows() || dst[i] >= num_rows) {
      throw ShapeError("WeightedScatterSum: index out of range");
    }
    const double w = wv[i];
    if (w == 0.0) continue;
    auto o = out.row(dst[i]);
    const auto s = xv.row(src[i]);
    for (size_t c = 0; c < s.size(); ++c) o[c] += w * s[c];
  }
  std::vector<uint32_t> s(src.begin(), src.end()), d(dst.begin(), dst.end());
  return x.tape()->Record(
      std::move(out), {weights, x},
      [weights, x, s = std::move(s), d = std::move(d)](Tape& tape, const Tensor&,
                                                       const Tensor& g) {
        const Tensor& wv = tape.value(weights.id());
        const Tensor& xv = tape.value(x.id());
        Tensor* gw = tape.GradBuffer(weights.id());
        Tensor* gx = tape.GradBuffer(x.id());
        for (size_t i = 0; i < s.size(); ++i) {
          const auto go = g.row(d[i]);
          if (gw != nullptr) {
            const auto xr = xv.row(s[i]);
            double dotp = 0.0;
            for (size_t c = 0; c < go.size(); ++c) dotp += go[c] * xr[c];
            (*gw)[i] += dotp;
          }
          if (gx != nullptr && wv[i] != 0.0) {
            auto gr = gx->row(s[i]);
            for (size_t c = 0; c < go.size(); ++c) gr[c] += wv[i] * go[c];
          }
        }
      });
}

Var Dropout(Var x, double rate, std::mt19937_64& rng) {
  if (rate <= 0.0) return x;
  if (rate >= 1.0) throw ShapeError("Dropout: rate must be < 1");
  const Tensor& xv = x.value();
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  Tensor mask(xv.rows(), xv.cols());
  for (size_t i = 0; i < mask.size(); ++i) mask[i] = keep(rng) ? scale : 0.0;
  Tensor out(xv.rows(), xv.cols());
  for (size_t i = 0; i < out.size(); ++i) out[i] = xv[i] * mask[i];
  return x.tape()->Record(
      std::move(out), {x},
      [x, mask = std::move(mask)](Tape& tape, const Tensor&, const Tensor& g) {
        Tensor d(g.rows(), g.cols());
        for (size_t i = 0; i < g.size(); ++i) d[i] = g[i] * mask[i];
        Accumulate(tape, x, d);
      });
}

double FiniteDiffCheck(const ScalarFn& fn, const std::vector<Tensor>& inputs,
                       double eps) {
  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& t : inputs) vars.push_back(tape.Variable(t));
    Var loss = fn(tape, vars);
    tape.Backward(loss);
    for (Var v : vars) {
      analytic.push_back(v.grad().empty() ? Tensor::ZerosLike(v.value()) : v.grad());
    }
  }
  auto evaluate = [&fn](const std::vector<Tensor>& xs) {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& t : xs) vars.push_back(tape.Constant(t));
    return fn(tape, vars).value().item();
  };
  std::vector<Tensor> probe = inputs;
  double worst = 0.0;
  for (size_t k = 0; k < probe.size(); ++k) {
    for (size_t i = 0; i < probe[k].size(); ++i) {
      const double original = probe[k][i];
      probe[k][i] = original + eps;
      const double up = evaluate(probe);
      probe[k][i] = original - eps;
      const double down = evaluate(probe);
      probe[k][i] = original;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[k][i];
      worst = std::max(worst, std::abs(a - numeric) / std::max(1.0, std::abs(a)));
    }
  }
  return worst;
}

}  // namespace knowddi
