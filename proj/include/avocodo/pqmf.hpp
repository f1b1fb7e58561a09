#pragma once

#include "avocodo/autograd.hpp"

#include <Eigen/Dense>

namespace avocodo::pqmf {

using Vec = Eigen::ArrayXd;
using Mat = Eigen::ArrayXXd;

/// Kaiser-windowed lowpass prototype description. cutoff_ratio is the
/// lowpass edge as a fraction of the sampling rate (the Nyquist band
/// [0, fs/2] maps to cutoff_ratio in [0, 0.5]; a bank with N bands wants
/// roughly 1/(2N) here).
struct PrototypeSpec {
  int taps = 256;        // filter order; impulse response has taps+1 coefficients
  double cutoff_ratio = 0.03;
  double beta = 10.0;

  void validate() const;

  /// Table defaults per band count (2/4/16/64); other counts fall back to
  /// taps 256, cutoff 1/(2N), beta 10.
  static PrototypeSpec for_bands(int n_bands);
};

struct PqmfBank {
  int n_bands = 0;
  Vec prototype;       // taps+1, symmetric
  Mat analysis;        // n_bands x (taps+1)
  Mat synthesis;       // n_bands x (taps+1)
  int group_delay = 0; // samples, analysis+synthesis cascade
  double dc_gain = 0;  // prototype DC gain after normalization

  int taps() const { return static_cast<int>(prototype.size()) - 1; }
};

struct SubbandSignals {
  int n_bands = 0;
  long length_per_band = 0;
  Mat data;  // n_bands x length_per_band
  double sample_rate_per_band = 0;
};

/// Symmetric Kaiser-windowed ideal-lowpass impulse response, taps+1 long.
/// Pure window design; no reconstruction tuning.
Vec design_prototype(const PrototypeSpec& spec);

/// Builds the cosine-modulated analysis/synthesis bank.
/// With refine=true (default) the prototype is numerically tuned for
/// near-perfect reconstruction before modulation: the Kaiser design from
/// `spec` seeds a gradient descent on the cascade's distortion and alias
/// transfer functions plus a stopband penalty. The tuned bank keeps the
/// spec's taps; refinement requires a power-of-two band count and is
/// skipped otherwise.
PqmfBank build_bank(int n_bands, const PrototypeSpec& spec, bool refine = true);

/// Convenience: Table-default spec for n_bands.
PqmfBank build_bank(int n_bands);

/// Analysis: filter with each band filter and decimate by N.
/// Output length floor(T/N) per band.
SubbandSignals analyze(const PqmfBank& bank, const Vec& x, double sample_rate = 22050.0);

/// Differentiable analysis for the training path (input 1 x T, output N x T/N).
ad::Var analyze_ad(const PqmfBank& bank, const ad::Var& x);

/// Synthesis: zero-stuff by N, filter, sum, gain-N compensation.
Vec synthesize(const PqmfBank& bank, const SubbandSignals& subbands);

/// First analysis band only: anti-aliased downsampling by N.
Vec lowpass_downsample(const PqmfBank& bank, const Vec& x);

/// Differentiable variant of lowpass_downsample (1 x T -> 1 x T/N).
ad::Var lowpass_downsample_ad(const PqmfBank& bank, const ad::Var& x);

/// Round-trip SNR in dB on the given signal, delay compensated.
double reconstruction_snr_db(const PqmfBank& bank, const Vec& x);

/// Process-wide cache keyed by (n_bands, spec); building NPR banks is not free.
const PqmfBank& cached_bank(int n_bands);

}  // namespace avocodo::pqmf
