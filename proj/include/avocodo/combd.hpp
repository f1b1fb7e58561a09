#pragma once

#include "avocodo/generator.hpp"
#include "avocodo/nn.hpp"
#include "avocodo/pqmf.hpp"

#include <vector>

namespace avocodo::disc {

/// A score map plus the hidden-layer activations feeding feature matching.
struct DiscOutput {
  ad::Var score;                  // 1 x L'
  std::vector<ad::Var> features;  // one per hidden layer, final score excluded
};

struct CoMBDConfig {
  // sub-module 0 sees the quarter-rate signal, 2 the full-rate one
  std::vector<std::vector<int>> kernels = {
      {7, 11, 11, 11, 11, 5}, {11, 21, 21, 21, 21, 5}, {15, 41, 41, 41, 41, 5}};
  std::vector<int> filters = {16, 64, 256, 1024, 1024, 1024};
  std::vector<int> groups = {1, 4, 16, 64, 256, 1};
  std::vector<int> strides = {1, 1, 4, 4, 4, 1};
  int out_kernel = 3;

  void validate() const;
  static CoMBDConfig full() { return {}; }
  static CoMBDConfig tiny();
};

/// All five CoMBD evaluations of one generator pass. primed entries reuse
/// the sub-module 0/1 weights on PQMF-downsampled full-band audio.
struct CoMBDOutputs {
  std::vector<DiscOutput> direct;  // p_1..p_3 on x1, x2, x3
  std::vector<DiscOutput> primed;  // p'_1, p'_2 on downsampled x3
};

class CoMBD {
 public:
  CoMBD(const CoMBDConfig& cfg, nn::ParamStore& store, const std::string& prefix = "combd");

  /// Runs sub-module k (0-based) on a 1 x L waveform node.
  DiscOutput forward_one(int submodule, const ad::Var& x) const;

  /// p_k on the three scales plus p'_1/p'_2 on bank4/bank2 first bands of x3.
  /// Weight sharing with the direct path is structural (same layers).
  CoMBDOutputs forward_scales(const gen::MultiScaleOutputs& outs, const pqmf::PqmfBank& bank4,
                              const pqmf::PqmfBank& bank2) const;

  int n_submodules() const { return static_cast<int>(layers_.size()); }

 private:
  CoMBDConfig cfg_;
  std::vector<std::vector<nn::Conv1d>> layers_;  // per sub-module
  std::vector<nn::Conv1d> out_convs_;
};

/// Ground-truth counterparts of the generator scales: x3 = x, x2/x1 the
/// first bands of the 2- and 4-band analyses.
gen::MultiScaleOutputs real_targets(const Eigen::ArrayXd& x, const pqmf::PqmfBank& bank4,
                                    const pqmf::PqmfBank& bank2);

}  // namespace avocodo::disc
