#pragma once

#include "avocodo/combd.hpp"
#include "avocodo/sbd.hpp"
#include "avocodo/stft.hpp"

#include <map>
#include <string>
#include <vector>

namespace avocodo::losses {

struct LossWeights {
  double lambda_fm = 2.0;
  double lambda_spec = 45.0;
};

/// mean((real - 1)^2) + mean(fake^2)
ad::Var lsgan_d(const ad::Var& score_real, const ad::Var& score_fake);

/// mean((fake - 1)^2)
ad::Var lsgan_g(const ad::Var& score_fake);

/// sum over layers of mean |real_t - fake_t|
ad::Var feature_matching(const std::vector<ad::Var>& real, const std::vector<ad::Var>& fake);

/// mean |log-mel(x) - log-mel(x_hat)|
ad::Var mel_reconstruction(const ad::Var& x, const ad::Var& x_hat,
                           const features::StftConfig& cfg, int sample_rate = 22050,
                           int n_mels = 80);

/// Discriminator objective: LSGAN terms only. Fake scores must come from
/// generator outputs cut from the generator's gradient path.
ad::Var discriminator_total(const disc::CoMBDOutputs& real_c,
                            const disc::CoMBDOutputs& fake_c_detached,
                            const std::vector<disc::DiscOutput>& real_s,
                            const std::vector<disc::DiscOutput>& fake_s_detached,
                            std::map<std::string, double>* breakdown = nullptr);

/// Generator objective: adversarial + weighted feature matching per
/// discriminator evaluation, plus the weighted mel term.
ad::Var generator_total(const disc::CoMBDOutputs& real_c, const disc::CoMBDOutputs& fake_c,
                        const std::vector<disc::DiscOutput>& real_s,
                        const std::vector<disc::DiscOutput>& fake_s, const ad::Var& x,
                        const ad::Var& x_hat, const LossWeights& weights,
                        const features::StftConfig& cfg, int sample_rate = 22050,
                        std::map<std::string, double>* breakdown = nullptr);

struct LossBundle {
  double total_g = 0;
  double total_d = 0;
  // already-weighted terms; each total equals the sum of its "g/" or "d/" entries
  std::map<std::string, double> breakdown;
  ad::Var g_node;  // backward through this for the generator update
  ad::Var d_node;  // backward through this for the discriminator update
};

/// Full objective composition. The generator side sums, per discriminator
/// evaluation, adversarial + weighted feature-matching terms, plus the
/// weighted mel term; the discriminator side sums only the LSGAN terms.
/// `fake_c_detached`/`fake_s_detached` must be scored on generator outputs
/// cut from the generator's gradient path.
LossBundle total_losses(const disc::CoMBDOutputs& real_c, const disc::CoMBDOutputs& fake_c,
                        const disc::CoMBDOutputs& fake_c_detached,
                        const std::vector<disc::DiscOutput>& real_s,
                        const std::vector<disc::DiscOutput>& fake_s,
                        const std::vector<disc::DiscOutput>& fake_s_detached,
                        const ad::Var& x, const ad::Var& x_hat, const LossWeights& weights,
                        const features::StftConfig& cfg, int sample_rate = 22050);

}  // namespace avocodo::losses
