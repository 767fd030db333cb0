#ifndef FSP_TAPE_HPP
#define FSP_TAPE_HPP

#include <deque>
#include <functional>
#include <vector>

#include "fsp/tensor.hpp"

namespace fsp {

class Tape;

// Handle to a node on a Tape. Cheap to copy; valid for the tape's lifetime.
struct Var {
  Tape* tape = nullptr;
  int id = -1;
  const Tensor& value() const;
  const Tensor& grad() const;
};

// Reverse-mode gradient tape. Ops append nodes in execution order;
// backward() walks them once in reverse, accumulating gradients additively
// into shared inputs. One backward pass per tape.
class Tape {
 public:
  Var leaf(Tensor value);      // differentiable input (parameter)
  Var constant(Tensor value);  // non-differentiable input

  // Low-level hook for ops defined outside this translation unit. The
  // backward closure must only add into input gradients via grad_ref().
  Var make_node(Tensor value, std::function<void()> backward, const char* op_name);

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  const Tensor& grad(Var v) const { return nodes_[v.id].grad; }
  Tensor& grad_ref(Var v) { return nodes_[v.id].grad; }

  void backward(Var root);  // root must be scalar (size() == 1)

  // Number of op nodes visited by the last backward() (each exactly once).
  int last_backward_visits() const { return last_visits_; }
  size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void()> back;  // empty for leaves/constants
  };
  // deque: node references stay valid while the tape grows
  std::deque<Node> nodes_;
  int last_visits_ = 0;
  bool backward_done_ = false;
};

// ---- differentiable ops ----
Var matmul(Var a, Var b);                 // [m x k] . [k x n]
Var add(Var a, Var b);                    // same shape
Var add_n(const std::vector<Var>& xs);    // same-shape sum
Var sub(Var a, Var b);
Var mul(Var a, Var b);                    // elementwise
Var scale(Var a, double c);
Var add_rowvec(Var m, Var row);           // [b x d] + [d], broadcast over rows
Var exp(Var x);
Var leaky_relu(Var x, double slope);      // slope in (0, 1); gradient at 0 is 1
Var elu(Var x);
Var softmax(Var x, int axis);             // axis -1 = last
Var cross_entropy(Var logits, const std::vector<int>& gold);  // mean NLL, [b x c]
Var mse(Var pred, Var target);
Var sum(Var x);
Var mean(Var x);
Var gather_rows(Var m, std::vector<int> rows);
Var concat_cols(const std::vector<Var>& parts);  // [b x d1], [b x d2], ... -> [b x sum]
Var node_norm(Var m, double eps = 1e-6);  // per row: (x - mean) / (std + eps)

// Central-finite-difference check of tape gradients for a scalar-valued
// function of the given inputs. Returns the max relative error over all
// input coordinates; the denominator is floored at 1e-3 so near-zero
// gradients are compared absolutely.
double grad_check(const std::function<Var(Tape&, const std::vector<Var>&)>& f,
                  const std::vector<Tensor>& inputs, double step = 1e-5);

}  // namespace fsp

#endif
