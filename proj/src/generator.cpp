#include "avocodo/generator.hpp"

#include <stdexcept>

namespace avocodo::gen {

void GeneratorConfig::validate() const {
  if (n_mels <= 0 || initial_channels <= 0) throw std::invalid_argument("GeneratorConfig: bad sizes");
  if (upsample_rates.empty() || upsample_rates.size() != upsample_kernels.size())
    throw std::invalid_argument("GeneratorConfig: upsample lists disagree");
  if (mrf_kernels.size() != mrf_dilations.size())
    throw std::invalid_argument("GeneratorConfig: MRF lists disagree");
  // channels halve per stage; they must stay integral
  int ch = initial_channels;
  for (size_t i = 0; i < upsample_rates.size(); ++i) {
    if (ch % 2 != 0) throw std::invalid_argument("GeneratorConfig: channels not divisible");
    ch /= 2;
  }
}

int GeneratorConfig::hop() const {
  int p = 1;
  for (int r : upsample_rates) p *= r;
  return p;
}

GeneratorConfig GeneratorConfig::v2() {
  GeneratorConfig c;
  c.initial_channels = 128;
  return c;
}

GeneratorConfig GeneratorConfig::tiny() {
  GeneratorConfig c;
  c.initial_channels = 16;
  c.mrf_kernels = {3};
  c.mrf_dilations = {{1, 3}};
  return c;
}

ResBlock::ResBlock(nn::ParamStore& store, const std::string& name, int channels, int kernel,
                   const std::vector<int>& dilations) {
  for (size_t i = 0; i < dilations.size(); ++i) {
    dilated_.emplace_back(store, name + ".d" + std::to_string(i), channels, channels, kernel,
                          1, dilations[i]);
    plain_.emplace_back(store, name + ".p" + std::to_string(i), channels, channels, kernel);
  }
}

ad::Var ResBlock::operator()(const ad::Var& h) const {
  ad::Var x = h;
  for (size_t i = 0; i < dilated_.size(); ++i) {
    ad::Var t = dilated_[i](ad::leaky_relu(x));
    t = plain_[i](ad::leaky_relu(t));
    x = ad::add(x, t);
  }
  return x;
}

MrfBlock::MrfBlock(nn::ParamStore& store, const std::string& name, int channels,
                   const GeneratorConfig& cfg) {
  for (size_t i = 0; i < cfg.mrf_kernels.size(); ++i)
    blocks_.emplace_back(store, name + ".k" + std::to_string(i), channels, cfg.mrf_kernels[i],
                         cfg.mrf_dilations[i]);
}

ad::Var MrfBlock::operator()(const ad::Var& h) const {
  ad::Var acc = blocks_[0](h);
  for (size_t i = 1; i < blocks_.size(); ++i) acc = ad::add(acc, blocks_[i](h));
  return ad::scale(acc, 1.0 / blocks_.size());
}

Generator::Generator(const GeneratorConfig& cfg, uint64_t seed)
    : cfg_(cfg), store_(std::make_unique<nn::ParamStore>(seed)) {
  cfg.validate();
  auto& s = *store_;
  conv_pre_ = nn::Conv1d(s, "gen/pre", cfg.n_mels, cfg.initial_channels, 7);
  int ch = cfg.initial_channels;
  for (size_t i = 0; i < cfg.upsample_rates.size(); ++i) {
    ups_.emplace_back(s, "gen/up" + std::to_string(i), ch, ch / 2, cfg.upsample_kernels[i],
                      cfg.upsample_rates[i]);
    ch /= 2;
    mrfs_.emplace_back(s, "gen/mrf" + std::to_string(i), ch, cfg);
  }
  conv_post_ = nn::Conv1d(s, "gen/post", ch, 1, 7);
  // intermediate taps sit after the 2nd and 3rd upsample stages
  proj1_ = nn::Conv1d(s, "gen/proj1", cfg.initial_channels / 4, 1, cfg.projection_kernel);
  proj2_ = nn::Conv1d(s, "gen/proj2", cfg.initial_channels / 8, 1, cfg.projection_kernel);
}

MultiScaleOutputs Generator::forward(const ad::Var& mel) const {
  if (mel->rows() != cfg_.n_mels)
    throw std::invalid_argument("Generator::forward: wrong mel band count");
  MultiScaleOutputs out;
  ad::Var h = conv_pre_(mel);
  for (size_t i = 0; i < ups_.size(); ++i) {
    h = ups_[i](ad::leaky_relu(h));
    h = mrfs_[i](h);
    if (i == 1) out.x1 = ad::tanh(proj1_(h));
    if (i == 2) out.x2 = ad::tanh(proj2_(h));
  }
  out.x3 = ad::tanh(conv_post_(ad::leaky_relu(h)));
  return out;
}

MultiScaleOutputs Generator::forward(const features::MelSpectrogram& mel) const {
  return forward(ad::constant(mel.values));
}

}  // namespace avocodo::gen
