#include "avocodo/dataset.hpp"

#include "avocodo/wav.hpp"

#include <algorithm>
#include <filesystem>
#include <random>
#include <stdexcept>

namespace avocodo::data {

namespace fs = std::filesystem;

Dataset::Dataset(const std::string& dir, int sample_rate) : sample_rate_(sample_rate) {
  if (!fs::is_directory(dir)) throw std::runtime_error("dataset: not a directory: " + dir);
  std::vector<std::string> candidates;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wav")
      candidates.push_back(e.path().string());
  std::sort(candidates.begin(), candidates.end());
  for (const auto& path : candidates) {
    try {
      const wav::Audio a = wav::read(path);
      if (a.sample_rate != sample_rate_ || a.samples.size() == 0)
        throw std::runtime_error("wrong rate");
      files_.push_back(path);
    } catch (const std::exception&) {
      rejected_.push_back(path);
    }
  }
  if (files_.empty()) throw std::runtime_error("dataset: no usable wav files in " + dir);
}

const Eigen::ArrayXd& Dataset::audio(size_t i) const {
  if (i >= files_.size()) throw std::out_of_range("dataset index");
  auto [it, inserted] = cache_.try_emplace(i);
  if (inserted) it->second = wav::read(files_[i]).samples;
  return it->second;
}

std::pair<Eigen::ArrayXd, features::MelSpectrogram> Dataset::sample_segment(
    long seg_len, uint64_t seed, const features::StftConfig& cfg) const {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, files_.size() - 1);
  const size_t i = pick(rng);
  return features::random_segment(audio(i), seg_len, rng(), cfg, sample_rate_);
}

}  // namespace avocodo::data
