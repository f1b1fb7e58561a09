#include "avocodo/trainer.hpp"

#include "avocodo/checkpoint.hpp"
#include "avocodo/pqmf.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace avocodo::train {

namespace {

ad::Var as_row(const Eigen::ArrayXd& x) {
  Eigen::ArrayXXd row(1, x.size());
  row.row(0) = x.transpose();
  return ad::constant(std::move(row));
}

void scale_grads(nn::ParamStore& store, double s) {
  for (const auto& [name, p] : store.all())
    if (p->grad.size() != 0) p->grad *= s;
}

gen::MultiScaleOutputs detach_all(const gen::MultiScaleOutputs& o) {
  return {ad::detach(o.x1), ad::detach(o.x2), ad::detach(o.x3)};
}

void check_finite(double v, const std::map<std::string, double>& breakdown, const char* what) {
  if (std::isfinite(v)) return;
  std::ostringstream os;
  os << "non-finite " << what << " loss; breakdown:";
  for (const auto& [k, x] : breakdown) os << " " << k << "=" << x;
  throw std::runtime_error(os.str());
}

}  // namespace

void TrainConfig::validate() const {
  generator.validate();
  combd.validate();
  sbd.validate();
  if (segment <= 0 || segment % 256 != 0)
    throw std::invalid_argument("TrainConfig: segment must be a positive multiple of 256");
  if (segment != sbd.segment_length)
    throw std::invalid_argument("TrainConfig: sbd.segment_length must equal segment");
  if (batch_size <= 0 || lr0 <= 0 || steps_per_epoch <= 0)
    throw std::invalid_argument("TrainConfig: bad scalar field");
}

double lr_at(const TrainConfig& cfg, long epoch) { return cfg.lr0 * std::pow(cfg.lr_decay, epoch); }

Trainer::Trainer(const TrainConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  gen_ = std::make_unique<gen::Generator>(cfg_.generator, cfg_.seed);
  disc_store_ = std::make_unique<nn::ParamStore>(cfg_.seed + 1);
  combd_ = std::make_unique<disc::CoMBD>(cfg_.combd, *disc_store_);
  sbd_ = std::make_unique<disc::SBD>(cfg_.sbd, *disc_store_);
  opt_g_ = std::make_unique<optim::AdamW>(gen_->params(), cfg_.lr0, cfg_.adam_beta1,
                                          cfg_.adam_beta2, cfg_.weight_decay);
  opt_d_ = std::make_unique<optim::AdamW>(*disc_store_, cfg_.lr0, cfg_.adam_beta1,
                                          cfg_.adam_beta2, cfg_.weight_decay);
}

StepResult Trainer::step(const std::vector<Eigen::ArrayXd>& segments) {
  if (segments.empty()) throw std::invalid_argument("Trainer::step: empty batch");
  for (const auto& s : segments)
    if (s.size() != cfg_.segment) throw std::invalid_argument("Trainer::step: bad segment length");

  const double lr = lr_at(cfg_, step_ / cfg_.steps_per_epoch);
  opt_g_->set_lr(lr);
  opt_d_->set_lr(lr);

  const auto& bank2 = pqmf::cached_bank(2);
  const auto& bank4 = pqmf::cached_bank(4);
  const auto& bank16 = pqmf::cached_bank(cfg_.sbd.n_bands_time);
  const auto& bank64 = pqmf::cached_bank(cfg_.sbd.n_bands_freq);
  const double inv_b = 1.0 / segments.size();

  StepResult res;
  res.step = ++step_;
  res.lr = lr;

  // cached per item for the generator phase
  std::vector<gen::MultiScaleOutputs> fakes, reals;
  std::vector<ad::Var> xs;

  // ---- discriminator update (generator outputs detached) ----
  disc_store_->zero_grads();
  for (const auto& seg : segments) {
    const auto mel = features::mel_spectrogram(seg, cfg_.stft, cfg_.sample_rate);
    gen::MultiScaleOutputs fake = gen_->forward(mel);
    gen::MultiScaleOutputs real = disc::real_targets(seg, bank4, bank2);
    ad::Var x = as_row(seg);

    gen::MultiScaleOutputs fake_det = detach_all(fake);
    auto real_c = combd_->forward_scales(real, bank4, bank2);
    auto fake_c = combd_->forward_scales(fake_det, bank4, bank2);
    auto real_s = sbd_->forward(real.x3, bank16, bank64);
    auto fake_s = sbd_->forward(fake_det.x3, bank16, bank64);

    std::map<std::string, double> bd;
    ad::Var d_node = losses::discriminator_total(real_c, fake_c, real_s, fake_s, &bd);
    check_finite(d_node->scalar(), bd, "discriminator");
    res.total_d += d_node->scalar() * inv_b;
    for (const auto& [k, v] : bd) res.breakdown[k] += v * inv_b;
    ad::backward(d_node);

    fakes.push_back(std::move(fake));
    reals.push_back(std::move(real));
    xs.push_back(std::move(x));
  }
  scale_grads(*disc_store_, inv_b);
  opt_d_->step();

  // ---- generator update (scored against the updated discriminator) ----
  gen_->params().zero_grads();
  disc_store_->zero_grads();  // generator backward also reaches these; discard
  for (size_t i = 0; i < segments.size(); ++i) {
    auto real_c = combd_->forward_scales(reals[i], bank4, bank2);
    auto fake_c = combd_->forward_scales(fakes[i], bank4, bank2);
    auto real_s = sbd_->forward(reals[i].x3, bank16, bank64);
    auto fake_s = sbd_->forward(fakes[i].x3, bank16, bank64);

    std::map<std::string, double> bd;
    ad::Var g_node = losses::generator_total(real_c, fake_c, real_s, fake_s, xs[i], fakes[i].x3,
                                             cfg_.weights, cfg_.stft, cfg_.sample_rate, &bd);
    check_finite(g_node->scalar(), bd, "generator");
    res.total_g += g_node->scalar() * inv_b;
    for (const auto& [k, v] : bd) res.breakdown[k] += v * inv_b;
    ad::backward(g_node);
  }
  scale_grads(gen_->params(), inv_b);
  opt_g_->step();
  return res;
}

void append_generator_config(std::map<std::string, Eigen::ArrayXXd>& entries,
                             const gen::GeneratorConfig& cfg) {
  auto put_list = [&entries](const std::string& key, const std::vector<int>& v) {
    Eigen::ArrayXXd a(1, v.size());
    for (size_t i = 0; i < v.size(); ++i) a(0, i) = v[i];
    entries["gencfg/" + key] = a;
  };
  entries["gencfg/scalars"] = [&cfg] {
    Eigen::ArrayXXd a(1, 3);
    a << cfg.n_mels, cfg.initial_channels, cfg.projection_kernel;
    return a;
  }();
  put_list("upsample_rates", cfg.upsample_rates);
  put_list("upsample_kernels", cfg.upsample_kernels);
  put_list("mrf_kernels", cfg.mrf_kernels);
  for (size_t i = 0; i < cfg.mrf_dilations.size(); ++i)
    put_list("mrf_dilations" + std::to_string(i), cfg.mrf_dilations[i]);
}

gen::GeneratorConfig generator_config_from(const std::map<std::string, Eigen::ArrayXXd>& entries) {
  auto get = [&entries](const std::string& key) -> const Eigen::ArrayXXd& {
    auto it = entries.find("gencfg/" + key);
    if (it == entries.end()) throw std::runtime_error("checkpoint lacks generator config: " + key);
    return it->second;
  };
  auto to_list = [](const Eigen::ArrayXXd& a) {
    std::vector<int> v(a.cols());
    for (long i = 0; i < a.cols(); ++i) v[i] = static_cast<int>(a(0, i));
    return v;
  };
  gen::GeneratorConfig cfg;
  const auto& s = get("scalars");
  cfg.n_mels = static_cast<int>(s(0, 0));
  cfg.initial_channels = static_cast<int>(s(0, 1));
  cfg.projection_kernel = static_cast<int>(s(0, 2));
  cfg.upsample_rates = to_list(get("upsample_rates"));
  cfg.upsample_kernels = to_list(get("upsample_kernels"));
  cfg.mrf_kernels = to_list(get("mrf_kernels"));
  cfg.mrf_dilations.clear();
  for (size_t i = 0; i < cfg.mrf_kernels.size(); ++i)
    cfg.mrf_dilations.push_back(to_list(get("mrf_dilations" + std::to_string(i))));
  return cfg;
}

std::unique_ptr<gen::Generator> load_generator(const std::string& path) {
  const auto entries = checkpoint::load(path);
  auto g = std::make_unique<gen::Generator>(generator_config_from(entries), 0);
  checkpoint::restore(g->params(), entries);
  return g;
}

void Trainer::save(const std::string& path) const {
  auto entries = checkpoint::snapshot(gen_->params());
  append_generator_config(entries, cfg_.generator);
  for (auto& [k, v] : checkpoint::snapshot(*disc_store_)) entries[k] = v;
  for (const auto& [k, v] : opt_g_->state()) entries["opt_g/" + k] = v;
  for (const auto& [k, v] : opt_d_->state()) entries["opt_d/" + k] = v;
  entries["trainer.step"] = Eigen::ArrayXXd::Constant(1, 1, static_cast<double>(step_));
  checkpoint::save(path, entries);
}

void Trainer::load(const std::string& path) {
  const auto entries = checkpoint::load(path);
  checkpoint::restore(gen_->params(), entries);
  checkpoint::restore(*disc_store_, entries);
  std::map<std::string, Eigen::ArrayXXd> sg, sd;
  for (const auto& [k, v] : entries) {
    if (k.rfind("opt_g/", 0) == 0) sg[k.substr(6)] = v;
    else if (k.rfind("opt_d/", 0) == 0) sd[k.substr(6)] = v;
  }
  opt_g_->load_state(sg);
  opt_d_->load_state(sd);
  auto it = entries.find("trainer.step");
  step_ = it != entries.end() ? static_cast<long>(it->second(0, 0)) : 0;
}

Eigen::ArrayXd infer(const gen::Generator& g, const features::MelSpectrogram& mel) {
  const auto outs = g.forward(mel);
  return outs.x3->value.row(0).transpose();
}

}  // namespace avocodo::train
