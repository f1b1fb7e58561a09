#pragma once

#include <Eigen/Dense>
#include <string>

namespace avocodo::wav {

struct Audio {
  Eigen::ArrayXd samples;  // mono, [-1, 1]
  int sample_rate = 22050;
};

/// Reads a 16-bit PCM mono WAV file. Throws std::runtime_error on any
/// other format.
Audio read(const std::string& path);

/// Writes 16-bit PCM mono. Samples are clamped to [-1, 1].
void write(const std::string& path, const Audio& audio);

}  // namespace avocodo::wav
