#pragma once

#include "avocodo/stft.hpp"

#include <Eigen/Dense>
#include <utility>

namespace avocodo::metrics {

using Vec = Eigen::ArrayXd;

struct F0Track {
  Vec f0;          // per-frame Hz; 0 = unvoiced
  Vec confidence;  // normalized autocorrelation peak per frame
  int hop = 256;

  long voiced_count() const { return (f0 > 0).count(); }
};

/// Normalized-autocorrelation pitch tracker: window 1024, hop 256, search
/// range 70..1000 Hz, voicing threshold 0.3 with a silence gate.
F0Track extract_f0(const Vec& x, int sample_rate = 22050);

/// RMSE over frames voiced in both tracks; 0 (with *empty_overlap = true)
/// when no frame is co-voiced.
double f0_rmse(const F0Track& ref, const F0Track& est, bool* empty_overlap = nullptr);

/// (false positive %, false negative %) of the voicing decision, est vs ref.
/// Undefined rates (no unvoiced / no voiced reference frames) report 0.
std::pair<double, double> vuv_rates(const F0Track& ref, const F0Track& est);

/// Mel-cepstral distortion in dB: DCT-II cepstra c1..c13 of the 80-band
/// log-mel, (10/ln10)*sqrt(2)*mean per-frame Euclidean distance; frame
/// aligned, no warping.
double mcd(const Vec& x, const Vec& y, int sample_rate = 22050);

/// MCD straight from two log-mel rasters (n_mels x F).
double mcd_from_logmel(const Eigen::ArrayXXd& mx, const Eigen::ArrayXXd& my);

/// Mean SSIM between the two log-mel rasters, 7x7 uniform windows, standard
/// constants from the joint dynamic range.
double spec_ssim(const Vec& x, const Vec& y, int sample_rate = 22050);

}  // namespace avocodo::metrics
