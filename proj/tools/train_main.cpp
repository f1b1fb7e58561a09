// Adversarial vocoder training:
//   train --config cfg.toml --data DIR --steps N --out ckpt/
// Emits one JSON line per step ({step, lr, losses...}) and writes
// ckpt/final.avck (plus periodic snapshots).

#include "avocodo/config.hpp"
#include "avocodo/dataset.hpp"
#include "avocodo/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace avocodo;

int main(int argc, char** argv) {
  CLI::App app{"vocoder training"};

  std::string config_path, data_dir, out_dir = "ckpt";
  long steps = 1000;
  long save_every = 0;

  app.add_option("--config", config_path, "TOML config")->check(CLI::ExistingFile);
  app.add_option("--data", data_dir, "directory of 22050 Hz mono wav files")->required();
  app.add_option("--steps", steps, "training steps")->required();
  app.add_option("--out", out_dir, "checkpoint directory");
  app.add_option("--save-every", save_every, "snapshot interval (0 = only final)");

  CLI11_PARSE(app, argc, argv);

  try {
    train::TrainConfig cfg =
        config_path.empty() ? train::TrainConfig{} : config::parse_train_config(config_path);
    data::Dataset dataset(data_dir, cfg.sample_rate);
    for (const auto& r : dataset.rejected()) std::cerr << "rejected: " << r << "\n";
    std::cerr << "dataset: " << dataset.size() << " files\n";

    fs::create_directories(out_dir);
    std::ofstream log((fs::path(out_dir) / "train.jsonl").string());
    train::Trainer trainer(cfg);

    for (long s = 0; s < steps; ++s) {
      std::vector<Eigen::ArrayXd> batch;
      for (int b = 0; b < cfg.batch_size; ++b) {
        const uint64_t seed = cfg.seed ^ (static_cast<uint64_t>(trainer.step_count()) * 1000003ull +
                                          static_cast<uint64_t>(b));
        batch.push_back(dataset.sample_segment(cfg.segment, seed, cfg.stft).first);
      }
      const auto res = trainer.step(batch);
      nlohmann::json j{{"step", res.step}, {"lr", res.lr},
                       {"total_g", res.total_g}, {"total_d", res.total_d}};
      for (const auto& [k, v] : res.breakdown) j[k] = v;
      const std::string line = j.dump();
      log << line << "\n";
      std::cout << line << std::endl;
      if (save_every > 0 && res.step % save_every == 0)
        trainer.save((fs::path(out_dir) / ("step" + std::to_string(res.step) + ".avck")).string());
    }
    trainer.save((fs::path(out_dir) / "final.avck").string());
    std::cerr << "wrote " << (fs::path(out_dir) / "final.avck").string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
