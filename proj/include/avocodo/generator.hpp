#pragma once

#include "avocodo/nn.hpp"
#include "avocodo/stft.hpp"

#include <memory>
#include <vector>

namespace avocodo::gen {

struct GeneratorConfig {
  int n_mels = 80;
  int initial_channels = 512;
  std::vector<int> upsample_rates = {8, 8, 2, 2};
  std::vector<int> upsample_kernels = {16, 16, 4, 4};
  std::vector<int> mrf_kernels = {3, 7, 11};
  std::vector<std::vector<int>> mrf_dilations = {{1, 3, 5}, {1, 3, 5}, {1, 3, 5}};
  int projection_kernel = 7;

  void validate() const;
  int hop() const;  // product of upsample rates

  static GeneratorConfig v1() { return {}; }
  static GeneratorConfig v2();
  /// Few-channel variant for gradient checks and desk-scale training.
  static GeneratorConfig tiny();
};

/// The three generator outputs: quarter, half, and full resolution.
struct MultiScaleOutputs {
  ad::Var x1;  // 1 x 64F
  ad::Var x2;  // 1 x 128F
  ad::Var x3;  // 1 x 256F
};

/// Residual stack for one MRF kernel size: pairs of (dilated, plain)
/// leaky-ReLU convolutions with residual connections.
class ResBlock {
 public:
  ResBlock() = default;
  ResBlock(nn::ParamStore& store, const std::string& name, int channels, int kernel,
           const std::vector<int>& dilations);
  ad::Var operator()(const ad::Var& h) const;

 private:
  std::vector<nn::Conv1d> dilated_, plain_;
};

/// Multi-receptive-field fusion: mean of the per-kernel residual stacks.
class MrfBlock {
 public:
  MrfBlock() = default;
  MrfBlock(nn::ParamStore& store, const std::string& name, int channels,
           const GeneratorConfig& cfg);
  ad::Var operator()(const ad::Var& h) const;

 private:
  std::vector<ResBlock> blocks_;
};

class Generator {
 public:
  Generator(const GeneratorConfig& cfg, uint64_t seed);

  /// mel: n_mels x F (plain log-mel values or an autograd node).
  MultiScaleOutputs forward(const ad::Var& mel) const;
  MultiScaleOutputs forward(const features::MelSpectrogram& mel) const;

  nn::ParamStore& params() { return *store_; }
  const nn::ParamStore& params() const { return *store_; }
  long count_parameters() const { return store_->total_scalars(); }
  const GeneratorConfig& config() const { return cfg_; }

 private:
  GeneratorConfig cfg_;
  std::unique_ptr<nn::ParamStore> store_;
  nn::Conv1d conv_pre_, conv_post_, proj1_, proj2_;
  std::vector<nn::ConvTranspose1d> ups_;
  std::vector<MrfBlock> mrfs_;
};

}  // namespace avocodo::gen
