#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

// Minimal reverse-mode autodiff over 2-D arrays (rows = channels,
// cols = time or an arbitrary second axis). Scalars are 1x1 arrays.
namespace avocodo::ad {

using Array = Eigen::ArrayXXd;

class Node;
using Var = std::shared_ptr<Node>;

class Node {
 public:
  Array value;
  Array grad;  // same shape as value, lazily allocated
  bool requires_grad = false;
  std::vector<Var> parents;
  // Pulls this node's grad into the parents' grads.
  std::function<void(Node&)> backprop;

  explicit Node(Array v) : value(std::move(v)) {}

  void ensure_grad() {
    if (grad.size() == 0) grad = Array::Zero(value.rows(), value.cols());
  }
  void accumulate(const Array& g) {
    ensure_grad();
    grad += g;
  }
  long rows() const { return value.rows(); }
  long cols() const { return value.cols(); }
  double scalar() const { return value(0, 0); }
};

/// Leaf without gradient tracking.
Var constant(Array v);
inline Var constant(double s) { return constant(Array::Constant(1, 1, s)); }

/// Trainable leaf.
Var parameter(Array v);

/// Runs reverse-mode through the graph rooted at `root`. `root` must be a
/// scalar; its gradient is seeded with 1.
void backward(const Var& root);

/// Recursively zeros gradients reachable from `root`.
void zero_grad_tree(const Var& root);

// ---- elementwise / reduction ops ----
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);        // elementwise, same shape
Var scale(const Var& a, double s);
Var add_scalar(const Var& a, double s);
Var leaky_relu(const Var& a, double slope = 0.1);
Var tanh(const Var& a);
Var mean_all(const Var& a);                 // -> scalar
Var sum_all(const Var& a);                  // -> scalar
Var mean_sq_err_to(const Var& a, double c); // mean((a - c)^2) -> scalar
Var mean_abs_diff(const Var& a, const Var& b);  // mean(|a-b|) -> scalar

/// Stacks scalars: c0 + sum_i w_i * s_i.
Var weighted_sum(const std::vector<Var>& terms, const std::vector<double>& weights);

Var sqrt_eps(const Var& a, double eps);        // sqrt(a + eps), elementwise
Var log_floor(const Var& a, double floor_val); // log(max(a, floor)), elementwise

/// out(i, j) = x(0, idx(i, j)); x must be 1 x T. Gradients scatter-add back.
Var gather_time(const Var& x, const Eigen::ArrayXXi& idx);

/// Detaches: same value, no gradient path.
Var detach(const Var& a);

/// Takes rows [row0, row0+nrows) as a view-copy with gradient routing.
Var slice_rows(const Var& a, long row0, long nrows);

/// Transposes rows/cols with gradient routing.
Var transpose(const Var& a);

/// Matrix product c = a.matrix() * b.matrix() with gradient routing.
Var matmul(const Var& a, const Var& b);

}  // namespace avocodo::ad
