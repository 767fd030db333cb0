#include "fsp/tape.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "fsp/error.hpp"

namespace fsp {

const Tensor& Var::value() const { return tape->value(*this); }
const Tensor& Var::grad() const { return tape->grad(*this); }

namespace {

void require_same_tape(Var a, Var b, const char* op) {
  if (a.tape == nullptr || a.tape != b.tape)
    raise(ErrorCode::invalid_argument, std::string(op) + ": operands belong to different tapes");
}

// The id an op result will get, known before make_node appends it. Backward
// closures capture this so they can read their own output gradient.
Var pending(Tape* t) { return Var{t, static_cast<int>(t->node_count())}; }

}  // namespace

Var Tape::leaf(Tensor value) { return make_node(std::move(value), nullptr, "leaf"); }

Var Tape::constant(Tensor value) { return make_node(std::move(value), nullptr, "constant"); }

Var Tape::make_node(Tensor value, std::function<void()> backward, const char* op_name) {
  if (!value.all_finite())
    raise(ErrorCode::training, std::string("non-finite values produced by op '") + op_name + "'");
  Node node;
  node.grad = Tensor(value.shape());
  node.value = std::move(value);
  node.back = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::backward(Var root) {
  if (root.tape != this || root.id < 0) raise(ErrorCode::invalid_argument, "backward: var not on this tape");
  if (nodes_[root.id].value.size() != 1)
    raise(ErrorCode::invalid_argument,
          "backward: root must be scalar, got shape " + shape_str(nodes_[root.id].value.shape()));
  if (backward_done_) raise(ErrorCode::invalid_argument, "backward: tape already traversed");
  backward_done_ = true;
  nodes_[root.id].grad[0] = 1.0;
  last_visits_ = 0;
  for (int i = root.id; i >= 0; --i) {
    if (nodes_[i].back) {
      nodes_[i].back();
      ++last_visits_;
    }
  }
}

Var matmul(Var a, Var b) {
  require_same_tape(a, b, "matmul");
  Tape* t = a.tape;
  const Tensor& av = t->value(a);
  const Tensor& bv = t->value(b);
  if (av.rank() != 2 || bv.rank() != 2 || av.cols() != bv.rows())
    raise(ErrorCode::dimension,
          "matmul: incompatible shapes " + shape_str(av.shape()) + " . " + shape_str(bv.shape()));
  int m = av.rows(), k = av.cols(), n = bv.cols();
  Tensor out = Tensor::matrix(m, n);
  {
    const double* A = av.data();
    const double* B = bv.data();
    double* C = out.data();
    for (int i = 0; i < m; ++i) {
      const double* Ai = A + static_cast<size_t>(i) * k;
      double* Ci = C + static_cast<size_t>(i) * n;
      for (int p = 0; p < k; ++p) {
        double aip = Ai[p];
        if (aip == 0.0) continue;
        const double* Bp = B + static_cast<size_t>(p) * n;
        for (int j = 0; j < n; ++j) Ci[j] += aip * Bp[j];
      }
    }
  }
  Var self = pending(t);
  auto back = [t, a, b, self, m, k, n]() {
    const double* G = t->grad(self).data();
    const double* A = t->value(a).data();
    const double* B = t->value(b).data();
    double* GA = t->grad_ref(a).data();
    double* GB = t->grad_ref(b).data();
    // dA += dC . B^T
    for (int i = 0; i < m; ++i) {
      const double* Gi = G + static_cast<size_t>(i) * n;
      double* GAi = GA + static_cast<size_t>(i) * k;
      for (int p = 0; p < k; ++p) {
        const double* Bp = B + static_cast<size_t>(p) * n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += Gi[j] * Bp[j];
        GAi[p] += acc;
      }
    }
    // dB += A^T . dC
    for (int i = 0; i < m; ++i) {
      const double* Ai = A + static_cast<size_t>(i) * k;
      const double* Gi = G + static_cast<size_t>(i) * n;
      for (int p = 0; p < k; ++p) {
        double aip = Ai[p];
        if (aip == 0.0) continue;
        double* GBp = GB + static_cast<size_t>(p) * n;
        for (int j = 0; j < n; ++j) GBp[j] += aip * Gi[j];
      }
    }
  };
  return t->make_node(std::move(out), back, "matmul");
}

Var add(Var a, Var b) {
  require_same_tape(a, b, "add");
  Tape* t = a.tape;
  const Tensor& av = t->value(a);
  const Tensor& bv = t->value(b);
  if (!av.same_shape(bv))
    raise(ErrorCode::dimension, "add: shape mismatch " + shape_str(av.shape()) + " vs " + shape_str(bv.shape()));
  Tensor out(av.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
  Var self = pending(t);
  auto back = [t, a, b, self]() {
    const Tensor& g = t->grad(self);
    Tensor& ga = t->grad_ref(a);
    Tensor& gb = t->grad_ref(b);
    for (size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] += g[i];
    }
  };
  return t->make_node(std::move(out), back, "add");
}

Var add_n(const std::vector<Var>& xs) {
  if (xs.empty()) raise(ErrorCode::invalid_argument, "add_n: empty operand list");
  if (xs.size() == 1) return xs[0];
  Tape* t = xs[0].tape;
  const Tensor& first = t->value(xs[0]);
  for (const Var& x : xs) {
    require_same_tape(xs[0], x, "add_n");
    if (!t->value(x).same_shape(first))
      raise(ErrorCode::dimension, "add_n: shape mismatch " + shape_str(first.shape()) + " vs " +
                                      shape_str(t->value(x).shape()));
  }
  Tensor out(first.shape());
  for (const Var& x : xs) {
    const Tensor& v = t->value(x);
    for (size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
  Var self = pending(t);
  std::vector<Var> inputs = xs;
  auto back = [t, inputs, self]() {
    const Tensor& g = t->grad(self);
    for (const Var& x : inputs) {
      Tensor& gx = t->grad_ref(x);
      for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
  };
  return t->make_node(std::move(out), back, "add_n");
}

Var sub(Var a, Var b) {
  require_same_tape(a, b, "sub");
  Tape* t = a.tape;
  const Tensor& av = t->value(a);
  const Tensor& bv = t->value(b);
  if (!av.same_shape(bv))
    raise(ErrorCode::dimension, "sub: shape mismatch " + shape_str(av.shape()) + " vs " + shape_str(bv.shape()));
  Tensor out(av.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] - bv[i];
  Var self = pending(t);
  auto back = [t, a, b, self]() {
    const Tensor& g = t->grad(self);
    Tensor& ga = t->grad_ref(a);
    Tensor& gb = t->grad_ref(b);
    for (size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] -= g[i];
    }
  };
  return t->make_node(std::move(out), back, "sub");
}

Var mul(Var a, Var b) {
  require_same_tape(a, b, "mul");
  Tape* t = a.tape;
  const Tensor& av = t->value(a);
  const Tensor& bv = t->value(b);
  if (!av.same_shape(bv))
    raise(ErrorCode::dimension, "mul: shape mismatch " + shape_str(av.shape()) + " vs " + shape_str(bv.shape()));
  Tensor out(av.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  Var self = pending(t);
  auto back = [t, a, b, self]() {
    const Tensor& g = t->grad(self);
    const Tensor& av = t->value(a);
    const Tensor& bv = t->value(b);
    Tensor& ga = t->grad_ref(a);
    Tensor& gb = t->grad_ref(b);
    for (size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i] * bv[i];
      gb[i] += g[i] * av[i];
    }
  };
  return t->make_node(std::move(out), back, "mul");
}

Var scale(Var a, double c) {
  Tape* t = a.tape;
  const Tensor& av = t->value(a);
  Tensor out(av.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] * c;
  Var self = pending(t);
  auto back = [t, a, c, self]() {
    const Tensor& g = t->grad(self);
    Tensor& ga = t->grad_ref(a);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += c * g[i];
  };
  return t->make_node(std::move(out), back, "scale");
}

Var add_rowvec(Var m, Var row) {
  require_same_tape(m, row, "add_rowvec");
  Tape* t = m.tape;
  const Tensor& mv = t->value(m);
  const Tensor& rv = t->value(row);
  if (mv.rank() != 2 || rv.rank() != 1 || mv.cols() != static_cast<int>(rv.size()))
    raise(ErrorCode::dimension,
          "add_rowvec: shapes " + shape_str(mv.shape()) + " + " + shape_str(rv.shape()));
  int rows = mv.rows(), cols = mv.cols();
  Tensor out = Tensor::matrix(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.at(i, j) = mv.at(i, j) + rv[j];
  Var self = pending(t);
  auto back = [t, m, row, self, rows, cols]() {
    const Tensor& g = t->grad(self);
    Tensor& gm = t->grad_ref(m);
    Tensor& gr = t->grad_ref(row);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        gm.at(i, j) += g.at(i, j);
        gr[j] += g.at(i, j);
      }
  };
  return t->make_node(std::move(out), back, "add_rowvec");
}

Var exp(Var x) {
  Tape* t = x.tape;
  const Tensor& xv = t->value(x);
  Tensor out(xv.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::exp(xv[i]);
  Var self = pending(t);
  auto back = [t, x, self]() {
    const Tensor& g = t->grad(self);
    const Tensor& y = t->value(self);
    Tensor& gx = t->grad_ref(x);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * y[i];
  };
  return t->make_node(std::move(out), back, "exp");
}

Var leaky_relu(Var x, double slope) {
  if (!(slope > 0.0 && slope < 1.0))
    raise(ErrorCode::invalid_argument, "leaky_relu: slope must be in (0, 1)");
  Tape* t = x.tape;
  const Tensor& xv = t->value(x);
  Tensor out(xv.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = xv[i] >= 0.0 ? xv[i] : slope * xv[i];
  Var self = pending(t);
  auto back = [t, x, slope, self]() {
    const Tensor& g = t->grad(self);
    const Tensor& xv = t->value(x);
    Tensor& gx = t->grad_ref(x);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (xv[i] >= 0.0 ? 1.0 : slope);
  };
  return t->make_node(std::move(out), back, "leaky_relu");
}

Var elu(Var x) {
  Tape* t = x.tape;
  const Tensor& xv = t->value(x);
  Tensor out(xv.shape());
  for (size_t i = 0; i < out.size(); ++i) out[i] = xv[i] > 0.0 ? xv[i] : std::expm1(xv[i]);
  Var self = pending(t);
  auto back = [t, x, self]() {
    const Tensor& g = t->grad(self);
    const Tensor& xv = t->value(x);
    const Tensor& y = t->value(self);
    Tensor& gx = t->grad_ref(x);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (xv[i] > 0.0 ? 1.0 : y[i] + 1.0);
  };
  return t->make_node(std::move(out), back, "elu");
}

namespace {

// Iterate a tensor as contiguous or strided "lines" along the given axis.
struct AxisView {
  int lines;   // number of independent softmax lines
  int len;     // elements per line
  int stride;  // stride between elements of a line
  int step;    // stride between line starts (for contiguous grouping)
};

AxisView axis_view(const Tensor& v, int axis) {
  int r = v.rank();
  if (r == 0) raise(ErrorCode::dimension, "softmax: scalar input");
  if (axis < 0) axis += r;
  if (axis < 0 || axis >= r) raise(ErrorCode::invalid_argument, "softmax: axis out of range");
  if (r == 1) return AxisView{1, static_cast<int>(v.size()), 1, 0};
  if (axis == 1) return AxisView{v.rows(), v.cols(), 1, v.cols()};
  return AxisView{v.cols(), v.rows(), v.cols(), 1};
}

}  // namespace

Var softmax(Var x, int axis) {
  Tape* t = x.tape;
  const Tensor& xv = t->value(x);
  AxisView view = axis_view(xv, axis);
  Tensor out(xv.shape());
  const double* in = xv.data();
  double* o = out.data();
  for (int l = 0; l < view.lines; ++l) {
    size_t base = static_cast<size_t>(l) * view.step;
    double mx = -HUGE_VAL;
    for (int i = 0; i < view.len; ++i) mx = std::max(mx, in[base + static_cast<size_t>(i) * view.stride]);
    double z = 0.0;
    for (int i = 0; i < view.len; ++i) {
      size_t idx = base + static_cast<size_t>(i) * view.stride;
      o[idx] = std::exp(in[idx] - mx);
      z += o[idx];
    }
    for (int i = 0; i < view.len; ++i) o[base + static_cast<size_t>(i) * view.stride] /= z;
  }
  Var self = pending(t);
  auto back = [t, x, self, view]() {
    const Tensor& g = t->grad(self);
    const Tensor& y = t->value(self);
    Tensor& gx = t->grad_ref(x);
    for (int l = 0; l < view.lines; ++l) {
      size_t base = static_cast<size_t>(l) * view.step;
      double dot = 0.0;
      for (int i = 0; i < view.len; ++i) {
        size_t idx = base + static_cast<size_t>(i) * view.stride;
        dot += g[idx] * y[idx];
      }
      for (int i = 0; i < view.len; ++i) {
        size_t idx = base + static_cast<size_t>(i) * view.stride;
        gx[idx] += y[idx] * (g[idx] - dot);
      }
    }
  };
  return t->make_node(std::move(out), back, "softmax");
}

Var cross_entropy(Var logits, const std::vector<int>& gold) {
  Tape* t = logits.tape;
  const Tensor& lv = t->value(logits);
  if (lv.rank() != 2) raise(ErrorCode::dimension, "cross_entropy: logits must be [batch x classes]");
  int batch = lv.rows(), classes = lv.cols();
  if (static_cast<int>(gold.size()) != batch)
    raise(ErrorCode::dimension, "cross_entropy: got " + std::to_string(gold.size()) + " labels for batch " +
                                    std::to_string(batch));
  for (int i = 0; i < batch; ++i)
    if (gold[i] < 0 || gold[i] >= classes)
      raise(ErrorCode::invalid_argument,
            "cross_entropy: label " + std::to_string(gold[i]) + " out of range [0, " + std::to_string(classes) + ")");
  // Cache probabilities for the backward pass.
  auto probs = std::make_shared<Tensor>(Tensor::matrix(batch, classes));
  double loss = 0.0;
  for (int i = 0; i < batch; ++i) {
    double mx = -HUGE_VAL;
    for (int j = 0; j < classes; ++j) mx = std::max(mx, lv.at(i, j));
    double z = 0.0;
    for (int j = 0; j < classes; ++j) {
      double e = std::exp(lv.at(i, j) - mx);
      probs->at(i, j) = e;
      z += e;
    }
    for (int j = 0; j < classes; ++j) probs->at(i, j) /= z;
    loss -= lv.at(i, gold[i]) - mx - std::log(z);
  }
  loss /= batch;
  Var self = pending(t);
  auto back = [t, logits, self, probs, gold, batch, classes]() {
    double g = t->grad(self).item();
    Tensor& gl = t->grad_ref(logits);
    double inv = g / batch;
    for (int i = 0; i < batch; ++i) {
      for (int j = 0; j < classes; ++j) gl.at(i, j) += inv * probs->at(i, j);
      gl.at(i, gold[i]) -= inv;
    }
  };
  return t->make_node(Tensor::scalar(loss), back, "cross_entropy");
}

Var mse(Var pred, Var target) {
  require_same_tape(pred, target, "mse");
  Tape* t = pred.tape;
  const Tensor& pv = t->value(pred);
  const Tensor& tv = t->value(target);
  if (!pv.same_shape(tv))
    raise(ErrorCode::dimension, "mse: shape mismatch " + shape_str(pv.shape()) + " vs " + shape_str(tv.shape()));
  size_t n = pv.size();
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = pv[i] - tv[i];
    acc += d * d;
  }
  acc /= static_cast<double>(n);
  Var self = pending(t);
  auto back = [t, pred, target, self, n]() {
    double g = t->grad(self).item();
    const Tensor& pv = t->value(pred);
    const Tensor& tv = t->value(target);
    Tensor& gp = t->grad_ref(pred);
    Tensor& gt = t->grad_ref(target);
    double c = 2.0 * g / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
      double d = c * (pv[i] - tv[i]);
      gp[i] += d;
      gt[i] -= d;
    }
  };
  return t->make_node(Tensor::scalar(acc), back, "mse");
}

Var sum(Var x) {
  Tape* t = x.tape;
  const Tensor& xv = t->value(x);
  double acc = 0.0;
  for (size_t i = 0; i < xv.size(); ++i) acc += xv[i];
  Var self = pending(t);
  auto back = [t, x, self]() {
    double g = t->grad(self).item();
    Tensor& gx = t->grad_ref(x);
    for (size_t i = 0; i < gx.size(); ++i) gx[i] += g;
  };
  return t->make_node(Tensor::scalar(acc), back, "sum");
}

Var mean(Var x) {
  size_t n = x.tape->value(x).size();
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var gather_rows(Var m, std::vector<int> rows) {
  Tape* t = m.tape;
  const Tensor& mv = t->value(m);
  if (mv.rank() != 2) raise(ErrorCode::dimension, "gather_rows: input must be a matrix");
  int total = mv.rows(), cols = mv.cols();
  for (int r : rows)
    if (r < 0 || r >= total)
      raise(ErrorCode::lookup, "gather_rows: row " + std::to_string(r) + " out of range [0, " +
                                   std::to_string(total) + ")");
  Tensor out = Tensor::matrix(static_cast<int>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols; ++j) out.at(static_cast<int>(i), j) = mv.at(rows[i], j);
  Var self = pending(t);
  auto back = [t, m, self, rows, cols]() {
    const Tensor& g = t->grad(self);
    Tensor& gm = t->grad_ref(m);
    for (size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < cols; ++j) gm.at(rows[i], j) += g.at(static_cast<int>(i), j);
  };
  return t->make_node(std::move(out), back, "gather_rows");
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) raise(ErrorCode::invalid_argument, "concat_cols: empty operand list");
  Tape* t = parts[0].tape;
  int rows = t->value(parts[0]).rows();
  int total_cols = 0;
  for (const Var& p : parts) {
    require_same_tape(parts[0], p, "concat_cols");
    const Tensor& v = t->value(p);
    if (v.rank() != 2 || v.rows() != rows)
      raise(ErrorCode::dimension, "concat_cols: row count mismatch at " + shape_str(v.shape()));
    total_cols += v.cols();
  }
  Tensor out = Tensor::matrix(rows, total_cols);
  int off = 0;
  for (const Var& p : parts) {
    const Tensor& v = t->value(p);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < v.cols(); ++j) out.at(i, off + j) = v.at(i, j);
    off += v.cols();
  }
  Var self = pending(t);
  std::vector<Var> inputs = parts;
  auto back = [t, inputs, self, rows]() {
    const Tensor& g = t->grad(self);
    int off = 0;
    for (const Var& p : inputs) {
      Tensor& gp = t->grad_ref(p);
      int cols = t->value(p).cols();
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) gp.at(i, j) += g.at(i, off + j);
      off += cols;
    }
  };
  return t->make_node(std::move(out), back, "concat_cols");
}

Var node_norm(Var m, double eps) {
  Tape* t = m.tape;
  const Tensor& mv = t->value(m);
  if (mv.rank() != 2 || mv.cols() < 2)
    raise(ErrorCode::dimension, "node_norm: input must be [nodes x features], features >= 2");
  int rows = mv.rows(), cols = mv.cols();
  Tensor out = Tensor::matrix(rows, cols);
  auto sigma = std::make_shared<std::vector<double>>(rows);
  for (int i = 0; i < rows; ++i) {
    double mu = 0.0;
    for (int j = 0; j < cols; ++j) mu += mv.at(i, j);
    mu /= cols;
    double var = 0.0;
    for (int j = 0; j < cols; ++j) {
      double d = mv.at(i, j) - mu;
      var += d * d;
    }
    var /= cols;
    double sd = std::sqrt(var);
    (*sigma)[i] = sd;
    for (int j = 0; j < cols; ++j) out.at(i, j) = (mv.at(i, j) - mu) / (sd + eps);
  }
  Var self = pending(t);
  auto back = [t, m, self, sigma, eps, rows, cols]() {
    const Tensor& g = t->grad(self);
    const Tensor& xv = t->value(m);
    Tensor& gx = t->grad_ref(m);
    for (int i = 0; i < rows; ++i) {
      double sd = (*sigma)[i];
      double mu = 0.0;
      for (int j = 0; j < cols; ++j) mu += xv.at(i, j);
      mu /= cols;
      double gsum = 0.0, gdot = 0.0;
      for (int j = 0; j < cols; ++j) {
        gsum += g.at(i, j);
        gdot += g.at(i, j) * (xv.at(i, j) - mu);
      }
      double gmean = gsum / cols;
      double denom = sd + eps;
      // d/dx_k [(x - mu)/(sd + eps)]: centered term minus the sd-path term;
      // a constant row has sd = 0 and zero output, where the sd path is dropped.
      double sd_coeff = sd > 0.0 ? gdot / (cols * sd * denom * denom) : 0.0;
      for (int j = 0; j < cols; ++j)
        gx.at(i, j) += (g.at(i, j) - gmean) / denom - sd_coeff * (xv.at(i, j) - mu);
    }
  };
  return t->make_node(std::move(out), back, "node_norm");
}

double grad_check(const std::function<Var(Tape&, const std::vector<Var>&)>& f,
                  const std::vector<Tensor>& inputs, double step) {
  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    vars.reserve(inputs.size());
    for (const Tensor& in : inputs) vars.push_back(tape.leaf(in));
    Var y = f(tape, vars);
    tape.backward(y);
    for (const Var& v : vars) analytic.push_back(tape.grad(v));
  }
  auto eval = [&](const std::vector<Tensor>& pts) {
    Tape tape;
    std::vector<Var> vars;
    vars.reserve(pts.size());
    for (const Tensor& in : pts) vars.push_back(tape.leaf(in));
    return f(tape, vars).value().item();
  };
  double max_err = 0.0;
  std::vector<Tensor> work = inputs;
  for (size_t i = 0; i < inputs.size(); ++i) {
    for (size_t j = 0; j < inputs[i].size(); ++j) {
      double orig = work[i][j];
      work[i][j] = orig + step;
      double fp = eval(work);
      work[i][j] = orig - step;
      double fm = eval(work);
      work[i][j] = orig;
      double numeric = (fp - fm) / (2.0 * step);
      double a = analytic[i][j];
      double denom = std::max({std::fabs(a), std::fabs(numeric), 1e-3});
      max_err = std::max(max_err, std::fabs(a - numeric) / denom);
    }
  }
  return max_err;
}

}  // namespace fsp
