#pragma once

#include "avocodo/combd.hpp"
#include "avocodo/nn.hpp"
#include "avocodo/pqmf.hpp"

#include <vector>

namespace avocodo::disc {

/// One multi-scale dilated convolution layer: a bank of same-kernel,
/// different-dilation convolutions summed, then a strided post-convolution.
struct MDCLayerSpec {
  int in_ch = 0;
  int out_ch = 0;
  int kernel = 3;
  std::vector<int> dilations = {1};
  int stride = 1;
  int post_kernel = 3;
};

class MDCLayer {
 public:
  MDCLayer() = default;
  MDCLayer(nn::ParamStore& store, const std::string& name, const MDCLayerSpec& spec);
  /// Bank sum -> post conv -> leaky ReLU.
  ad::Var operator()(const ad::Var& h) const;

 private:
  std::vector<nn::Conv1d> bank_;
  nn::Conv1d post_;
};

struct SBDSubmoduleConfig {
  int kernel = 3;
  std::vector<int> filters;                  // per layer
  std::vector<int> strides;                  // per layer (post-conv strides)
  std::vector<std::vector<int>> dilations;   // per layer
  int band_lo = 1;  // 1-based inclusive sub-band range (time sub-modules)
  int band_hi = 1;
  bool transposed = false;  // fSBD: convolve along the band axis

  void validate() const;
};

struct SBDConfig {
  std::vector<SBDSubmoduleConfig> submodules;  // tSBD1..3 then fSBD
  int n_bands_time = 16;
  int n_bands_freq = 64;
  long segment_length = 8192;  // fixes the fSBD channel count
  int out_kernel = 3;

  void validate() const;
  static SBDConfig full(long segment_length = 8192);
  static SBDConfig tiny(long segment_length = 1024);
};

class SBD {
 public:
  SBD(const SBDConfig& cfg, nn::ParamStore& store, const std::string& prefix = "sbd");

  /// x3: 1 x T full-band waveform, T = cfg.segment_length.
  std::vector<DiscOutput> forward(const ad::Var& x3, const pqmf::PqmfBank& bank16,
                                  const pqmf::PqmfBank& bank64) const;

  const SBDConfig& config() const { return cfg_; }

 private:
  DiscOutput run_submodule(size_t q, const ad::Var& h) const;

  SBDConfig cfg_;
  std::vector<std::vector<MDCLayer>> layers_;
  std::vector<nn::Conv1d> out_convs_;
};

}  // namespace avocodo::disc
