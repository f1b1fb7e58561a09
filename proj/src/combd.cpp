#include "avocodo/combd.hpp"

#include <stdexcept>

namespace avocodo::disc {

void CoMBDConfig::validate() const {
  const size_t L = filters.size();
  if (L == 0 || groups.size() != L || strides.size() != L)
    throw std::invalid_argument("CoMBDConfig: layer lists disagree");
  for (const auto& ks : kernels)
    if (ks.size() != L) throw std::invalid_argument("CoMBDConfig: kernel list length");
  for (size_t i = 0; i < L; ++i)
    if (filters[i] % groups[i] != 0)
      throw std::invalid_argument("CoMBDConfig: groups must divide filters");
}

CoMBDConfig CoMBDConfig::tiny() {
  CoMBDConfig c;
  c.kernels = {{7, 11, 5}, {11, 21, 5}, {15, 41, 5}};
  c.filters = {4, 8, 8};
  c.groups = {1, 2, 1};
  c.strides = {1, 4, 1};
  return c;
}

CoMBD::CoMBD(const CoMBDConfig& cfg, nn::ParamStore& store, const std::string& prefix)
    : cfg_(cfg) {
  cfg.validate();
  for (size_t m = 0; m < cfg.kernels.size(); ++m) {
    std::vector<nn::Conv1d> convs;
    int in_ch = 1;
    for (size_t j = 0; j < cfg.filters.size(); ++j) {
      // first layer input is mono; groups only ever apply to later layers
      const int g = j == 0 ? 1 : cfg.groups[j];
      convs.emplace_back(store, prefix + "/m" + std::to_string(m) + ".c" + std::to_string(j),
                         in_ch, cfg.filters[j], cfg.kernels[m][j], cfg.strides[j], 1, g);
      in_ch = cfg.filters[j];
    }
    layers_.push_back(std::move(convs));
    out_convs_.emplace_back(store, prefix + "/m" + std::to_string(m) + ".out", in_ch, 1,
                            cfg.out_kernel);
  }
}

DiscOutput CoMBD::forward_one(int submodule, const ad::Var& x) const {
  if (submodule < 0 || submodule >= n_submodules())
    throw std::invalid_argument("CoMBD::forward_one: bad sub-module index");
  if (x->rows() != 1) throw std::invalid_argument("CoMBD::forward_one: input must be 1 x L");
  DiscOutput out;
  ad::Var h = x;
  for (const auto& conv : layers_[submodule]) {
    h = ad::leaky_relu(conv(h));
    out.features.push_back(h);
  }
  out.score = out_convs_[submodule](h);
  return out;
}

CoMBDOutputs CoMBD::forward_scales(const gen::MultiScaleOutputs& outs,
                                   const pqmf::PqmfBank& bank4,
                                   const pqmf::PqmfBank& bank2) const {
  if (bank4.n_bands != 4 || bank2.n_bands != 2)
    throw std::invalid_argument("CoMBD::forward_scales: banks must have 4 and 2 bands");
  CoMBDOutputs r;
  r.direct.push_back(forward_one(0, outs.x1));
  r.direct.push_back(forward_one(1, outs.x2));
  r.direct.push_back(forward_one(2, outs.x3));
  r.primed.push_back(forward_one(0, pqmf::lowpass_downsample_ad(bank4, outs.x3)));
  r.primed.push_back(forward_one(1, pqmf::lowpass_downsample_ad(bank2, outs.x3)));
  return r;
}

gen::MultiScaleOutputs real_targets(const Eigen::ArrayXd& x, const pqmf::PqmfBank& bank4,
                                    const pqmf::PqmfBank& bank2) {
  if (x.size() % 256 != 0)
    throw std::invalid_argument("real_targets: length must be a multiple of 256");
  gen::MultiScaleOutputs t;
  Eigen::ArrayXXd row(1, x.size());
  row.row(0) = x.transpose();
  t.x3 = ad::constant(row);
  t.x2 = ad::constant(pqmf::lowpass_downsample(bank2, x).transpose().eval());
  t.x1 = ad::constant(pqmf::lowpass_downsample(bank4, x).transpose().eval());
  return t;
}

}  // namespace avocodo::disc
