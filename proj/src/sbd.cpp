#include "avocodo/sbd.hpp"

#include <stdexcept>

namespace avocodo::disc {

MDCLayer::MDCLayer(nn::ParamStore& store, const std::string& name, const MDCLayerSpec& spec) {
  if (spec.dilations.empty()) throw std::invalid_argument("MDCLayer: needs >= 1 dilation");
  for (size_t i = 0; i < spec.dilations.size(); ++i)
    bank_.emplace_back(store, name + ".b" + std::to_string(i), spec.in_ch, spec.out_ch,
                       spec.kernel, 1, spec.dilations[i]);
  post_ = nn::Conv1d(store, name + ".post", spec.out_ch, spec.out_ch, spec.post_kernel,
                     spec.stride);
}

ad::Var MDCLayer::operator()(const ad::Var& h) const {
  ad::Var acc = bank_[0](h);
  for (size_t i = 1; i < bank_.size(); ++i) acc = ad::add(acc, bank_[i](h));
  return ad::leaky_relu(post_(acc));
}

void SBDSubmoduleConfig::validate() const {
  const size_t L = filters.size();
  if (L == 0 || strides.size() != L || dilations.size() != L)
    throw std::invalid_argument("SBDSubmoduleConfig: layer lists disagree");
  if (band_lo < 1 || band_hi < band_lo)
    throw std::invalid_argument("SBDSubmoduleConfig: bad band range");
}

void SBDConfig::validate() const {
  if (submodules.empty()) throw std::invalid_argument("SBDConfig: no sub-modules");
  for (const auto& s : submodules) {
    s.validate();
    const int limit = s.transposed ? n_bands_freq : n_bands_time;
    if (s.band_hi > limit) throw std::invalid_argument("SBDConfig: band range exceeds bank");
  }
  if (segment_length % n_bands_freq != 0)
    throw std::invalid_argument("SBDConfig: segment not divisible by freq band count");
}

SBDConfig SBDConfig::full(long segment_length) {
  SBDConfig c;
  c.segment_length = segment_length;
  auto tsbd = [](int kernel, std::vector<int> dil, int lo, int hi) {
    SBDSubmoduleConfig s;
    s.kernel = kernel;
    s.filters = {64, 128, 256, 256, 256};
    s.strides = {1, 1, 3, 3, 1};
    s.dilations.assign(5, dil);
    s.band_lo = lo;
    s.band_hi = hi;
    return s;
  };
  c.submodules.push_back(tsbd(7, {5, 7, 11}, 1, 6));
  c.submodules.push_back(tsbd(5, {3, 5, 7}, 1, 11));
  c.submodules.push_back(tsbd(3, {1, 2, 3}, 1, 16));
  SBDSubmoduleConfig f;
  f.kernel = 5;
  f.filters = {32, 64, 128, 128, 128};
  f.strides = {1, 1, 3, 3, 1};
  f.dilations = {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {2, 3, 5}, {2, 3, 5}};
  f.band_lo = 1;
  f.band_hi = 64;
  f.transposed = true;
  c.submodules.push_back(f);
  return c;
}

SBDConfig SBDConfig::tiny(long segment_length) {
  SBDConfig c;
  c.segment_length = segment_length;
  auto sub = [](int kernel, std::vector<int> dil, int lo, int hi, bool transposed) {
    SBDSubmoduleConfig s;
    s.kernel = kernel;
    s.filters = {4, 8};
    s.strides = {1, 3};
    s.dilations.assign(2, dil);
    s.band_lo = lo;
    s.band_hi = hi;
    s.transposed = transposed;
    return s;
  };
  c.submodules.push_back(sub(5, {1, 2}, 1, 6, false));
  c.submodules.push_back(sub(3, {1, 2}, 1, 16, false));
  c.submodules.push_back(sub(3, {1, 2}, 1, 64, true));
  return c;
}

SBD::SBD(const SBDConfig& cfg, nn::ParamStore& store, const std::string& prefix) : cfg_(cfg) {
  cfg.validate();
  for (size_t q = 0; q < cfg.submodules.size(); ++q) {
    const auto& sub = cfg.submodules[q];
    std::vector<MDCLayer> mdc;
    int in_ch = sub.transposed ? static_cast<int>(cfg.segment_length / cfg.n_bands_freq)
                               : sub.band_hi - sub.band_lo + 1;
    for (size_t j = 0; j < sub.filters.size(); ++j) {
      MDCLayerSpec spec;
      spec.in_ch = in_ch;
      spec.out_ch = sub.filters[j];
      spec.kernel = sub.kernel;
      spec.dilations = sub.dilations[j];
      spec.stride = sub.strides[j];
      mdc.emplace_back(store, prefix + "/q" + std::to_string(q) + ".l" + std::to_string(j), spec);
      in_ch = sub.filters[j];
    }
    layers_.push_back(std::move(mdc));
    out_convs_.emplace_back(store, prefix + "/q" + std::to_string(q) + ".out", in_ch, 1,
                            cfg.out_kernel);
  }
}

DiscOutput SBD::run_submodule(size_t q, const ad::Var& h) const {
  DiscOutput out;
  ad::Var x = h;
  for (const auto& layer : layers_[q]) {
    x = layer(x);
    out.features.push_back(x);
  }
  out.score = out_convs_[q](x);
  return out;
}

std::vector<DiscOutput> SBD::forward(const ad::Var& x3, const pqmf::PqmfBank& bank16,
                                     const pqmf::PqmfBank& bank64) const {
  if (x3->rows() != 1) throw std::invalid_argument("SBD::forward: input must be 1 x T");
  if (x3->cols() != cfg_.segment_length)
    throw std::invalid_argument("SBD::forward: unexpected segment length");
  if (bank16.n_bands != cfg_.n_bands_time || bank64.n_bands != cfg_.n_bands_freq)
    throw std::invalid_argument("SBD::forward: bank band counts disagree with config");

  ad::Var bands_t = pqmf::analyze_ad(bank16, x3);   // N x T/N
  ad::Var bands_f;                                   // built lazily
  std::vector<DiscOutput> outs;
  for (size_t q = 0; q < cfg_.submodules.size(); ++q) {
    const auto& sub = cfg_.submodules[q];
    if (sub.transposed) {
      if (!bands_f) bands_f = ad::transpose(pqmf::analyze_ad(bank64, x3));  // T/M x M
      outs.push_back(run_submodule(q, bands_f));
    } else {
      outs.push_back(run_submodule(
          q, ad::slice_rows(bands_t, sub.band_lo - 1, sub.band_hi - sub.band_lo + 1)));
    }
  }
  return outs;
}

}  // namespace avocodo::disc
