#pragma once

#include "avocodo/combd.hpp"
#include "avocodo/generator.hpp"
#include "avocodo/losses.hpp"
#include "avocodo/optim.hpp"
#include "avocodo/sbd.hpp"

#include <memory>
#include <string>
#include <vector>

namespace avocodo::train {

struct TrainConfig {
  gen::GeneratorConfig generator = gen::GeneratorConfig::v2();
  disc::CoMBDConfig combd;
  disc::SBDConfig sbd = disc::SBDConfig::full();
  losses::LossWeights weights;
  features::StftConfig stft;

  int sample_rate = 22050;
  long segment = 8192;   // singing preset: 65536
  int batch_size = 16;
  double lr0 = 2e-3;
  double adam_beta1 = 0.8;
  double adam_beta2 = 0.99;
  double lr_decay = 0.999;  // per epoch
  double weight_decay = 1e-2;
  long steps_per_epoch = 1000;
  uint64_t seed = 1234;

  void validate() const;
};

/// lr0 * decay^epoch
double lr_at(const TrainConfig& cfg, long epoch);

struct StepResult {
  double total_g = 0;
  double total_d = 0;
  std::map<std::string, double> breakdown;  // batch means, already weighted
  double lr = 0;
  long step = 0;
};

class Trainer {
 public:
  explicit Trainer(const TrainConfig& cfg);

  /// One D-then-G update on a batch of waveform segments (each cfg.segment
  /// samples). The discriminator sees detached generator outputs; the
  /// generator loss is scored against the updated discriminator.
  StepResult step(const std::vector<Eigen::ArrayXd>& segments);

  long step_count() const { return step_; }
  gen::Generator& generator() { return *gen_; }
  const gen::Generator& generator() const { return *gen_; }
  nn::ParamStore& disc_params() { return *disc_store_; }
  const TrainConfig& config() const { return cfg_; }

  /// AVCK checkpoint with generator, discriminator, and optimizer state.
  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  TrainConfig cfg_;
  std::unique_ptr<gen::Generator> gen_;
  std::unique_ptr<nn::ParamStore> disc_store_;
  std::unique_ptr<disc::CoMBD> combd_;
  std::unique_ptr<disc::SBD> sbd_;
  std::unique_ptr<optim::AdamW> opt_g_, opt_d_;
  long step_ = 0;
};

/// Synthesis from a trained generator: returns x3 at full resolution.
Eigen::ArrayXd infer(const gen::Generator& g, const features::MelSpectrogram& mel);

/// Architecture metadata stored alongside parameters ("gencfg/..." entries).
void append_generator_config(std::map<std::string, Eigen::ArrayXXd>& entries,
                             const gen::GeneratorConfig& cfg);
gen::GeneratorConfig generator_config_from(const std::map<std::string, Eigen::ArrayXXd>& entries);

/// Rebuilds a generator from a checkpoint written by Trainer::save.
std::unique_ptr<gen::Generator> load_generator(const std::string& path);

}  // namespace avocodo::train
