#pragma once

#include "avocodo/autograd.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

namespace avocodo::features {

using Vec = Eigen::ArrayXd;
using Mat = Eigen::ArrayXXd;

struct StftConfig {
  int fft_size = 1024;
  int win_size = 1024;
  int hop_size = 256;

  void validate() const;
};

struct MelSpectrogram {
  int n_mels = 80;
  Mat values;  // n_mels x frames, log amplitude
  int sample_rate = 22050;

  long frames() const { return values.cols(); }
};

/// Hann-windowed magnitude spectrogram, (fft/2+1) x F. The signal is
/// reflection-padded by (win - hop)/2 on each side so F = T/hop exactly
/// when hop divides T.
Mat stft_magnitude(const Vec& x, const StftConfig& cfg);

/// HTK-mel triangle filter bank, n_mels x (fft/2+1), spanning 0..fs/2.
Mat mel_filterbank(int n_mels, int fft_size, double sample_rate);

/// log(max(mel @ |STFT|, 1e-5)); natural log.
MelSpectrogram mel_spectrogram(const Vec& x, const StftConfig& cfg,
                               int sample_rate = 22050, int n_mels = 80);

/// Differentiable log-mel of a 1 x T waveform node; identical math to
/// mel_spectrogram (DFT realized as matrix products).
ad::Var log_mel_ad(const ad::Var& x, const StftConfig& cfg,
                   int sample_rate = 22050, int n_mels = 80);

/// Deterministic random slice of seg_len samples (zero-padded right if x is
/// short) plus its mel. The seed fully determines the slice.
std::pair<Vec, MelSpectrogram> random_segment(const Vec& x, long seg_len, uint64_t seed,
                                              const StftConfig& cfg, int sample_rate = 22050);

}  // namespace avocodo::features
