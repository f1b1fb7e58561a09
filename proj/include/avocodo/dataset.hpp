#pragma once

#include "avocodo/stft.hpp"

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace avocodo::data {

/// Indexed directory of 22050 Hz 16-bit PCM mono WAV files. Files that fail
/// to decode or have the wrong rate land in `rejected` instead of aborting.
class Dataset {
 public:
  Dataset(const std::string& dir, int sample_rate = 22050);

  size_t size() const { return files_.size(); }
  const std::vector<std::string>& files() const { return files_; }
  const std::vector<std::string>& rejected() const { return rejected_; }

  /// Waveform of item i (cached after first load).
  const Eigen::ArrayXd& audio(size_t i) const;

  /// Seeded draw: picks an item and a segment position from `seed`.
  std::pair<Eigen::ArrayXd, features::MelSpectrogram> sample_segment(
      long seg_len, uint64_t seed, const features::StftConfig& cfg) const;

  int sample_rate() const { return sample_rate_; }

 private:
  std::vector<std::string> files_;
  std::vector<std::string> rejected_;
  int sample_rate_;
  mutable std::map<size_t, Eigen::ArrayXd> cache_;
};

}  // namespace avocodo::data
