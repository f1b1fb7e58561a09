#include "avocodo/autograd.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace avocodo::ad {

Var constant(Array v) { return std::make_shared<Node>(std::move(v)); }

Var parameter(Array v) {
  auto n = std::make_shared<Node>(std::move(v));
  n->requires_grad = true;
  return n;
}

namespace {

Var make_op(Array value, std::vector<Var> parents, std::function<void(Node&)> backprop) {
  auto n = std::make_shared<Node>(std::move(value));
  for (const auto& p : parents)
    if (p->requires_grad) { n->requires_grad = true; break; }
  if (n->requires_grad) {
    n->parents = std::move(parents);
    n->backprop = std::move(backprop);
  }
  return n;
}

void topo(const Var& v, std::unordered_set<Node*>& seen, std::vector<Var>& order) {
  if (!v->requires_grad || seen.count(v.get())) return;
  seen.insert(v.get());
  for (const auto& p : v->parents) topo(p, seen, order);
  order.push_back(v);
}

}  // namespace

void backward(const Var& root) {
  if (root->value.size() != 1) throw std::invalid_argument("backward: root must be scalar");
  std::unordered_set<Node*> seen;
  std::vector<Var> order;
  topo(root, seen, order);
  root->ensure_grad();
  root->grad(0, 0) = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto& n = **it;
    if (n.backprop && n.grad.size() != 0) n.backprop(n);
  }
}

void zero_grad_tree(const Var& root) {
  std::unordered_set<Node*> seen;
  std::vector<Var> order;
  topo(root, seen, order);
  for (auto& v : order) v->grad.resize(0, 0);
}

Var add(const Var& a, const Var& b) {
  return make_op(a->value + b->value, {a, b}, [a, b](Node& n) {
    if (a->requires_grad) a->accumulate(n.grad);
    if (b->requires_grad) b->accumulate(n.grad);
  });
}

Var sub(const Var& a, const Var& b) {
  return make_op(a->value - b->value, {a, b}, [a, b](Node& n) {
    if (a->requires_grad) a->accumulate(n.grad);
    if (b->requires_grad) b->accumulate(-n.grad);
  });
}

Var mul(const Var& a, const Var& b) {
  return make_op(a->value * b->value, {a, b}, [a, b](Node& n) {
    if (a->requires_grad) a->accumulate(n.grad * b->value);
    if (b->requires_grad) b->accumulate(n.grad * a->value);
  });
}

Var scale(const Var& a, double s) {
  return make_op(a->value * s, {a}, [a, s](Node& n) { a->accumulate(n.grad * s); });
}

Var add_scalar(const Var& a, double s) {
  return make_op(a->value + s, {a}, [a](Node& n) { a->accumulate(n.grad); });
}

Var leaky_relu(const Var& a, double slope) {
  Array mask = (a->value > 0.0).cast<double>();
  Array factor = mask + slope * (1.0 - mask);
  return make_op(a->value * factor, {a},
                 [a, factor](Node& n) { a->accumulate(n.grad * factor); });
}

Var tanh(const Var& a) {
  Array t = a->value.tanh();
  return make_op(t, {a}, [a, t](Node& n) { a->accumulate(n.grad * (1.0 - t * t)); });
}

Var mean_all(const Var& a) {
  const double inv = 1.0 / static_cast<double>(a->value.size());
  return make_op(Array::Constant(1, 1, a->value.mean()), {a}, [a, inv](Node& n) {
    a->accumulate(Array::Constant(a->rows(), a->cols(), n.grad(0, 0) * inv));
  });
}

Var sum_all(const Var& a) {
  return make_op(Array::Constant(1, 1, a->value.sum()), {a}, [a](Node& n) {
    a->accumulate(Array::Constant(a->rows(), a->cols(), n.grad(0, 0)));
  });
}

Var mean_sq_err_to(const Var& a, double c) {
  Array diff = a->value - c;
  const double inv = 1.0 / static_cast<double>(diff.size());
  return make_op(Array::Constant(1, 1, diff.square().mean()), {a}, [a, diff, inv](Node& n) {
    a->accumulate(n.grad(0, 0) * 2.0 * inv * diff);
  });
}

Var mean_abs_diff(const Var& a, const Var& b) {
  if (a->rows() != b->rows() || a->cols() != b->cols())
    throw std::invalid_argument("mean_abs_diff: shape mismatch");
  Array diff = a->value - b->value;
  const double inv = 1.0 / static_cast<double>(diff.size());
  return make_op(Array::Constant(1, 1, diff.abs().mean()), {a, b}, [a, b, diff, inv](Node& n) {
    Array s = diff.sign() * (n.grad(0, 0) * inv);
    if (a->requires_grad) a->accumulate(s);
    if (b->requires_grad) b->accumulate(-s);
  });
}

Var weighted_sum(const std::vector<Var>& terms, const std::vector<double>& weights) {
  if (terms.size() != weights.size())
    throw std::invalid_argument("weighted_sum: length mismatch");
  double total = 0.0;
  for (size_t i = 0; i < terms.size(); ++i) total += weights[i] * terms[i]->scalar();
  std::vector<Var> parents(terms);
  auto ws = weights;
  return make_op(Array::Constant(1, 1, total), std::move(parents), [terms, ws](Node& n) {
    for (size_t i = 0; i < terms.size(); ++i)
      if (terms[i]->requires_grad)
        terms[i]->accumulate(Array::Constant(1, 1, n.grad(0, 0) * ws[i]));
  });
}

Var sqrt_eps(const Var& a, double eps) {
  Array v = (a->value + eps).sqrt();
  return make_op(v, {a}, [a, v](Node& n) {
    if (a->requires_grad) a->accumulate(n.grad * 0.5 / v);
  });
}

Var log_floor(const Var& a, double floor_val) {
  Array clamped = a->value.max(floor_val);
  return make_op(clamped.log(), {a}, [a, floor_val](Node& n) {
    if (a->requires_grad)
      a->accumulate(n.grad * (a->value > floor_val).cast<double>() / a->value.max(floor_val));
  });
}

Var gather_time(const Var& x, const Eigen::ArrayXXi& idx) {
  if (x->rows() != 1) throw std::invalid_argument("gather_time: x must be 1 x T");
  Array v(idx.rows(), idx.cols());
  for (long j = 0; j < idx.cols(); ++j)
    for (long i = 0; i < idx.rows(); ++i) v(i, j) = x->value(0, idx(i, j));
  return make_op(std::move(v), {x}, [x, idx](Node& n) {
    if (!x->requires_grad) return;
    x->ensure_grad();
    for (long j = 0; j < idx.cols(); ++j)
      for (long i = 0; i < idx.rows(); ++i) x->grad(0, idx(i, j)) += n.grad(i, j);
  });
}

Var detach(const Var& a) { return constant(a->value); }

Var slice_rows(const Var& a, long row0, long nrows) {
  Array v = a->value.middleRows(row0, nrows);
  return make_op(std::move(v), {a}, [a, row0, nrows](Node& n) {
    a->ensure_grad();
    a->grad.middleRows(row0, nrows) += n.grad;
  });
}

Var transpose(const Var& a) {
  Array v = a->value.transpose();
  return make_op(std::move(v), {a},
                 [a](Node& n) { a->accumulate(n.grad.transpose().array()); });
}

Var matmul(const Var& a, const Var& b) {
  Array v = (a->value.matrix() * b->value.matrix()).array();
  return make_op(std::move(v), {a, b}, [a, b](Node& n) {
    if (a->requires_grad)
      a->accumulate((n.grad.matrix() * b->value.matrix().transpose()).array());
    if (b->requires_grad)
      b->accumulate((a->value.matrix().transpose() * n.grad.matrix()).array());
  });
}

}  // namespace avocodo::ad
