#include "avocodo/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace avocodo::nn {

using ad::Array;
using ad::Var;

ad::Var ParamStore::create(const std::string& name, long rows, long cols, double stddev) {
  if (params_.count(name)) throw std::invalid_argument("duplicate parameter: " + name);
  std::normal_distribution<double> dist(0.0, stddev);
  Array v(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) v(r, c) = dist(rng_);
  auto p = ad::parameter(std::move(v));
  params_[name] = p;
  return p;
}

ad::Var ParamStore::create_const(const std::string& name, long rows, long cols, double value) {
  if (params_.count(name)) throw std::invalid_argument("duplicate parameter: " + name);
  auto p = ad::parameter(Array::Constant(rows, cols, value));
  params_[name] = p;
  return p;
}

ad::Var ParamStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::out_of_range("no parameter: " + name);
  return it->second;
}

long ParamStore::total_scalars() const {
  long n = 0;
  for (const auto& [_, p] : params_) n += p->value.size();
  return n;
}

void ParamStore::zero_grads() {
  for (auto& [_, p] : params_) p->grad.resize(0, 0);
}

ad::Var weight_norm(const ad::Var& v, const ad::Var& g) {
  const long rows = v->rows(), cols = v->cols();
  Eigen::ArrayXd norms(rows);
  for (long r = 0; r < rows; ++r) norms[r] = std::max(v->value.row(r).matrix().norm(), 1e-12);
  Array w(rows, cols);
  for (long r = 0; r < rows; ++r) w.row(r) = v->value.row(r) * (g->value(r, 0) / norms[r]);

  auto n = std::make_shared<ad::Node>(std::move(w));
  n->requires_grad = v->requires_grad || g->requires_grad;
  if (!n->requires_grad) return n;
  n->parents = {v, g};
  n->backprop = [v, g, norms](ad::Node& node) {
    for (long r = 0; r < node.rows(); ++r) {
      const double inv_norm = 1.0 / norms[r];
      Eigen::ArrayXd vhat = v->value.row(r).transpose() * inv_norm;
      Eigen::ArrayXd dw = node.grad.row(r).transpose();
      const double dot = (dw * vhat).sum();
      if (g->requires_grad) {
        g->ensure_grad();
        g->grad(r, 0) += dot;
      }
      if (v->requires_grad) {
        v->ensure_grad();
        v->grad.row(r) += (g->value(r, 0) * inv_norm * (dw - dot * vhat)).transpose();
      }
    }
  };
  return n;
}

long conv_out_len(long in_len, int kernel, int stride, int dilation, int pad_left, int pad_right) {
  const long span = static_cast<long>(dilation) * (kernel - 1) + 1;
  return (in_len + pad_left + pad_right - span) / stride + 1;
}

ad::Var conv1d_raw(const ad::Var& x, const ad::Var& weight, const ad::Var& bias,
                   int kernel, const ConvOpts& o) {
  const long in_ch = x->rows(), L = x->cols();
  const long out_ch = weight->rows();
  const long in_pg = in_ch / o.groups;
  const long out_pg = out_ch / o.groups;
  if (weight->cols() != in_pg * kernel)
    throw std::invalid_argument("conv1d: weight shape mismatch");
  if (in_ch % o.groups != 0 || out_ch % o.groups != 0)
    throw std::invalid_argument("conv1d: groups must divide channel counts");
  const long L_out = conv_out_len(L, kernel, o.stride, o.dilation, o.pad_left, o.pad_right);
  if (L_out <= 0) throw std::invalid_argument("conv1d: input too short");

  Array xpad = Array::Zero(in_ch, L + o.pad_left + o.pad_right);
  xpad.middleCols(o.pad_left, L) = x->value;

  // im2col per group, kept for the backward pass
  auto cols = std::make_shared<std::vector<Eigen::MatrixXd>>();
  cols->reserve(o.groups);
  Array y(out_ch, L_out);
  for (int g = 0; g < o.groups; ++g) {
    Eigen::MatrixXd M(in_pg * kernel, L_out);
    for (long c = 0; c < in_pg; ++c)
      for (int j = 0; j < kernel; ++j) {
        const long row = c * kernel + j;
        for (long t = 0; t < L_out; ++t)
          M(row, t) = xpad(g * in_pg + c, t * o.stride + static_cast<long>(j) * o.dilation);
      }
    y.middleRows(g * out_pg, out_pg) =
        (weight->value.middleRows(g * out_pg, out_pg).matrix() * M).array();
    cols->push_back(std::move(M));
  }
  if (bias) y.colwise() += bias->value.col(0);

  std::vector<Var> parents = {x, weight};
  if (bias) parents.push_back(bias);
  auto n = std::make_shared<ad::Node>(std::move(y));
  for (const auto& p : parents)
    if (p->requires_grad) { n->requires_grad = true; break; }
  if (!n->requires_grad) return n;
  n->parents = parents;
  n->backprop = [x, weight, bias, kernel, o, cols, in_pg, out_pg, L](ad::Node& node) {
    const long L_out = node.cols();
    if (bias && bias->requires_grad) {
      bias->ensure_grad();
      bias->grad.col(0) += node.grad.rowwise().sum();
    }
    Array dxpad;
    if (x->requires_grad) dxpad = Array::Zero(x->rows(), L + o.pad_left + o.pad_right);
    for (int g = 0; g < o.groups; ++g) {
      auto dY = node.grad.middleRows(g * out_pg, out_pg).matrix();
      if (weight->requires_grad) {
        weight->ensure_grad();
        weight->grad.middleRows(g * out_pg, out_pg) += (dY * (*cols)[g].transpose()).array();
      }
      if (x->requires_grad) {
        Eigen::MatrixXd dM =
            weight->value.middleRows(g * out_pg, out_pg).matrix().transpose() * dY;
        for (long c = 0; c < in_pg; ++c)
          for (int j = 0; j < kernel; ++j) {
            const long row = c * kernel + j;
            for (long t = 0; t < L_out; ++t)
              dxpad(g * in_pg + c, t * o.stride + static_cast<long>(j) * o.dilation) += dM(row, t);
          }
      }
    }
    if (x->requires_grad) x->accumulate(dxpad.middleCols(o.pad_left, L));
  };
  return n;
}

ad::Var conv_transpose1d_raw(const ad::Var& x, const ad::Var& weight, const ad::Var& bias,
                             int out_ch, int kernel, int stride, int pad_left, int pad_right) {
  const long in_ch = x->rows(), L = x->cols();
  if (weight->rows() != in_ch || weight->cols() != static_cast<long>(out_ch) * kernel)
    throw std::invalid_argument("conv_transpose1d: weight shape mismatch");
  const long full = (L - 1) * stride + kernel;
  const long L_out = full - pad_left - pad_right;
  if (L_out <= 0) throw std::invalid_argument("conv_transpose1d: input too short");

  Array ybuf = Array::Zero(out_ch, full);
  for (long c = 0; c < in_ch; ++c)
    for (int oc = 0; oc < out_ch; ++oc)
      for (int j = 0; j < kernel; ++j) {
        const double w = weight->value(c, static_cast<long>(oc) * kernel + j);
        if (w == 0.0) continue;
        for (long t = 0; t < L; ++t) ybuf(oc, t * stride + j) += w * x->value(c, t);
      }
  Array y = ybuf.middleCols(pad_left, L_out);
  if (bias) y.colwise() += bias->value.col(0);

  std::vector<Var> parents = {x, weight};
  if (bias) parents.push_back(bias);
  auto n = std::make_shared<ad::Node>(std::move(y));
  for (const auto& p : parents)
    if (p->requires_grad) { n->requires_grad = true; break; }
  if (!n->requires_grad) return n;
  n->parents = parents;
  n->backprop = [x, weight, bias, out_ch, kernel, stride, pad_left, full, L](ad::Node& node) {
    if (bias && bias->requires_grad) {
      bias->ensure_grad();
      bias->grad.col(0) += node.grad.rowwise().sum();
    }
    Array dybuf = Array::Zero(out_ch, full);
    dybuf.middleCols(pad_left, node.cols()) = node.grad;
    if (weight->requires_grad) weight->ensure_grad();
    if (x->requires_grad) x->ensure_grad();
    for (long c = 0; c < x->rows(); ++c)
      for (int oc = 0; oc < out_ch; ++oc)
        for (int j = 0; j < kernel; ++j) {
          const long wc = static_cast<long>(oc) * kernel + j;
          double dw = 0.0;
          const double w = weight->value(c, wc);
          for (long t = 0; t < L; ++t) {
            const double dy = dybuf(oc, t * stride + j);
            dw += dy * x->value(c, t);
            if (x->requires_grad) x->grad(c, t) += w * dy;
          }
          if (weight->requires_grad) weight->grad(c, wc) += dw;
        }
  };
  return n;
}

Conv1d::Conv1d(ParamStore& store, const std::string& name, int in_ch, int out_ch, int kernel,
               int stride, int dilation, int groups)
    : in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel), stride_(stride),
      dilation_(dilation), groups_(groups) {
  v_ = store.create(name + ".v", out_ch, (in_ch / groups) * kernel);
  g_ = store.create_const(name + ".g", out_ch, 1, 0.0);
  // g starts at ||v_row|| so the effective weight equals v at init
  for (int r = 0; r < out_ch; ++r) g_->value(r, 0) = v_->value.row(r).matrix().norm();
  b_ = store.create_const(name + ".b", out_ch, 1, 0.0);
}

ad::Var Conv1d::operator()(const ad::Var& x) const {
  ConvOpts o;
  o.stride = stride_;
  o.dilation = dilation_;
  o.groups = groups_;
  const int span = dilation_ * (kernel_ - 1);
  o.pad_left = span / 2;
  o.pad_right = span - o.pad_left;
  return conv1d_raw(x, weight_norm(v_, g_), b_, kernel_, o);
}

ConvTranspose1d::ConvTranspose1d(ParamStore& store, const std::string& name, int in_ch,
                                 int out_ch, int kernel, int stride)
    : in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel), stride_(stride) {
  v_ = store.create(name + ".v", in_ch, static_cast<long>(out_ch) * kernel);
  g_ = store.create_const(name + ".g", in_ch, 1, 0.0);
  for (int r = 0; r < in_ch; ++r) g_->value(r, 0) = v_->value.row(r).matrix().norm();
  b_ = store.create_const(name + ".b", out_ch, 1, 0.0);
}

ad::Var ConvTranspose1d::operator()(const ad::Var& x) const {
  const int pad = (kernel_ - stride_) / 2;
  return conv_transpose1d_raw(x, weight_norm(v_, g_), b_, out_ch_, kernel_, stride_,
                              pad, kernel_ - stride_ - pad);
}

}  // namespace avocodo::nn
