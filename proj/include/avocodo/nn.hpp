#pragma once

#include "avocodo/autograd.hpp"

#include <map>
#include <random>
#include <string>

namespace avocodo::nn {

/// Named parameter registry. Iteration order is lexicographic, which fixes
/// both checkpoint layout and the draw order of random initializers.
class ParamStore {
 public:
  explicit ParamStore(uint64_t seed) : rng_(seed) {}

  /// Normal(0, stddev) initialized parameter.
  ad::Var create(const std::string& name, long rows, long cols, double stddev = 0.01);
  /// Constant-initialized parameter.
  ad::Var create_const(const std::string& name, long rows, long cols, double value);

  ad::Var at(const std::string& name) const;
  bool contains(const std::string& name) const { return params_.count(name) > 0; }
  const std::map<std::string, ad::Var>& all() const { return params_; }

  long total_scalars() const;
  void zero_grads();

 private:
  std::map<std::string, ad::Var> params_;
  std::mt19937_64 rng_;
};

/// w_row = g * v_row / ||v_row|| (row-wise weight normalization).
ad::Var weight_norm(const ad::Var& v, const ad::Var& g);

struct ConvOpts {
  int stride = 1;
  int dilation = 1;
  int groups = 1;
  int pad_left = 0;
  int pad_right = 0;
};

/// 1-D convolution (cross-correlation). x: (in_ch, L); weight: (out_ch,
/// in_ch/groups * kernel); bias: (out_ch, 1) or null.
ad::Var conv1d_raw(const ad::Var& x, const ad::Var& weight, const ad::Var& bias,
                   int kernel, const ConvOpts& opts);

/// Transposed 1-D convolution. weight: (in_ch, out_ch * kernel);
/// bias: (out_ch, 1). Output length = (L-1)*stride + kernel - pad_left - pad_right.
ad::Var conv_transpose1d_raw(const ad::Var& x, const ad::Var& weight, const ad::Var& bias,
                             int out_ch, int kernel, int stride, int pad_left, int pad_right);

inline int same_pad(int kernel, int dilation = 1) { return dilation * (kernel - 1) / 2; }

/// Weight-normalized convolution layer with "same" padding by default.
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(ParamStore& store, const std::string& name, int in_ch, int out_ch, int kernel,
         int stride = 1, int dilation = 1, int groups = 1);

  ad::Var operator()(const ad::Var& x) const;

  int in_ch() const { return in_ch_; }
  int out_ch() const { return out_ch_; }

 private:
  ad::Var v_, g_, b_;
  int in_ch_ = 0, out_ch_ = 0, kernel_ = 0, stride_ = 1, dilation_ = 1, groups_ = 1;
};

/// Weight-normalized transposed convolution with HiFi-GAN padding
/// (kernel - stride) / 2, so output length is exactly L * stride.
class ConvTranspose1d {
 public:
  ConvTranspose1d() = default;
  ConvTranspose1d(ParamStore& store, const std::string& name, int in_ch, int out_ch,
                  int kernel, int stride);

  ad::Var operator()(const ad::Var& x) const;

 private:
  ad::Var v_, g_, b_;
  int in_ch_ = 0, out_ch_ = 0, kernel_ = 0, stride_ = 1;
};

/// Output length of a conv with the given geometry.
long conv_out_len(long in_len, int kernel, int stride, int dilation, int pad_left, int pad_right);

}  // namespace avocodo::nn
