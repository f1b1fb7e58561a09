#include "avocodo/losses.hpp"

#include <stdexcept>

namespace avocodo::losses {

ad::Var lsgan_d(const ad::Var& score_real, const ad::Var& score_fake) {
  if (score_real->rows() != score_fake->rows() || score_real->cols() != score_fake->cols())
    throw std::invalid_argument("lsgan_d: score shapes disagree");
  return ad::add(ad::mean_sq_err_to(score_real, 1.0), ad::mean_sq_err_to(score_fake, 0.0));
}

ad::Var lsgan_g(const ad::Var& score_fake) { return ad::mean_sq_err_to(score_fake, 1.0); }

ad::Var feature_matching(const std::vector<ad::Var>& real, const std::vector<ad::Var>& fake) {
  if (real.size() != fake.size() || real.empty())
    throw std::invalid_argument("feature_matching: layer lists disagree");
  ad::Var acc;
  for (size_t t = 0; t < real.size(); ++t) {
    if (real[t]->rows() != fake[t]->rows() || real[t]->cols() != fake[t]->cols())
      throw std::invalid_argument("feature_matching: layer shapes disagree");
    ad::Var term = ad::mean_abs_diff(real[t], fake[t]);
    acc = acc ? ad::add(acc, term) : term;
  }
  return acc;
}

ad::Var mel_reconstruction(const ad::Var& x, const ad::Var& x_hat,
                           const features::StftConfig& cfg, int sample_rate, int n_mels) {
  if (x->cols() != x_hat->cols()) throw std::invalid_argument("mel_reconstruction: lengths differ");
  return ad::mean_abs_diff(features::log_mel_ad(x, cfg, sample_rate, n_mels),
                           features::log_mel_ad(x_hat, cfg, sample_rate, n_mels));
}

namespace {

// One discriminator evaluation's generator-side contribution.
ad::Var g_pair(const disc::DiscOutput& real, const disc::DiscOutput& fake, double lambda_fm,
               const std::string& key, std::map<std::string, double>* bd, ad::Var acc) {
  ad::Var adv = lsgan_g(fake.score);
  ad::Var fm = ad::scale(feature_matching(real.features, fake.features), lambda_fm);
  (*bd)["g/adv_" + key] += adv->scalar();
  (*bd)["g/fm_" + key] += fm->scalar();
  ad::Var term = ad::add(adv, fm);
  return acc ? ad::add(acc, term) : term;
}

ad::Var d_pair(const disc::DiscOutput& real, const disc::DiscOutput& fake,
               const std::string& key, std::map<std::string, double>* bd, ad::Var acc) {
  ad::Var term = lsgan_d(real.score, fake.score);
  (*bd)["d/" + key] += term->scalar();
  return acc ? ad::add(acc, term) : term;
}

}  // namespace

ad::Var discriminator_total(const disc::CoMBDOutputs& real_c,
                            const disc::CoMBDOutputs& fake_c_detached,
                            const std::vector<disc::DiscOutput>& real_s,
                            const std::vector<disc::DiscOutput>& fake_s_detached,
                            std::map<std::string, double>* breakdown) {
  if (real_c.direct.size() != fake_c_detached.direct.size() ||
      real_c.primed.size() != fake_c_detached.primed.size() ||
      real_s.size() != fake_s_detached.size())
    throw std::invalid_argument("discriminator_total: term counts disagree");
  std::map<std::string, double> local;
  auto* bd = breakdown ? breakdown : &local;
  ad::Var node;
  for (size_t p = 0; p < real_c.direct.size(); ++p)
    node = d_pair(real_c.direct[p], fake_c_detached.direct[p], "combd", bd, node);
  for (size_t p = 0; p < real_c.primed.size(); ++p)
    node = d_pair(real_c.primed[p], fake_c_detached.primed[p], "combd_primed", bd, node);
  for (size_t q = 0; q < real_s.size(); ++q)
    node = d_pair(real_s[q], fake_s_detached[q], "sbd", bd, node);
  return node;
}

ad::Var generator_total(const disc::CoMBDOutputs& real_c, const disc::CoMBDOutputs& fake_c,
                        const std::vector<disc::DiscOutput>& real_s,
                        const std::vector<disc::DiscOutput>& fake_s, const ad::Var& x,
                        const ad::Var& x_hat, const LossWeights& weights,
                        const features::StftConfig& cfg, int sample_rate,
                        std::map<std::string, double>* breakdown) {
  if (real_c.direct.size() != fake_c.direct.size() ||
      real_c.primed.size() != fake_c.primed.size() || real_s.size() != fake_s.size())
    throw std::invalid_argument("generator_total: term counts disagree");
  std::map<std::string, double> local;
  auto* bd = breakdown ? breakdown : &local;
  ad::Var node;
  for (size_t p = 0; p < real_c.direct.size(); ++p)
    node = g_pair(real_c.direct[p], fake_c.direct[p], weights.lambda_fm, "combd", bd, node);
  for (size_t p = 0; p < real_c.primed.size(); ++p)
    node = g_pair(real_c.primed[p], fake_c.primed[p], weights.lambda_fm, "combd_primed", bd, node);
  for (size_t q = 0; q < real_s.size(); ++q)
    node = g_pair(real_s[q], fake_s[q], weights.lambda_fm, "sbd", bd, node);
  ad::Var spec = ad::scale(mel_reconstruction(x, x_hat, cfg, sample_rate), weights.lambda_spec);
  (*bd)["g/spec"] += spec->scalar();
  return node ? ad::add(node, spec) : spec;
}

LossBundle total_losses(const disc::CoMBDOutputs& real_c, const disc::CoMBDOutputs& fake_c,
                        const disc::CoMBDOutputs& fake_c_detached,
                        const std::vector<disc::DiscOutput>& real_s,
                        const std::vector<disc::DiscOutput>& fake_s,
                        const std::vector<disc::DiscOutput>& fake_s_detached,
                        const ad::Var& x, const ad::Var& x_hat, const LossWeights& weights,
                        const features::StftConfig& cfg, int sample_rate) {
  LossBundle b;
  b.g_node = generator_total(real_c, fake_c, real_s, fake_s, x, x_hat, weights, cfg,
                             sample_rate, &b.breakdown);
  b.d_node = discriminator_total(real_c, fake_c_detached, real_s, fake_s_detached, &b.breakdown);
  b.total_g = b.g_node->scalar();
  b.total_d = b.d_node->scalar();
  return b;
}

}  // namespace avocodo::losses
