#include "avocodo/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace avocodo::metrics {

namespace {

constexpr int kWin = 1024;
constexpr int kHop = 256;
constexpr double kVoicingThreshold = 0.3;
constexpr double kSilenceRms = 1e-4;
constexpr double kF0Min = 70.0;
constexpr double kF0Max = 1000.0;

features::StftConfig metric_stft() { return {}; }  // 1024/1024/256

Eigen::ArrayXXd log_mel(const Vec& x, int sample_rate) {
  return features::mel_spectrogram(x, metric_stft(), sample_rate).values;
}

}  // namespace

F0Track extract_f0(const Vec& x, int sample_rate) {
  if (x.size() == 0) throw std::invalid_argument("extract_f0: empty input");
  const long lag_min = std::max<long>(2, static_cast<long>(sample_rate / kF0Max));
  const long lag_max = static_cast<long>(sample_rate / kF0Min);
  const long n_frames = x.size() >= kWin ? (x.size() - kWin) / kHop + 1 : 1;

  F0Track track;
  track.hop = kHop;
  track.f0 = Vec::Zero(n_frames);
  track.confidence = Vec::Zero(n_frames);

  for (long f = 0; f < n_frames; ++f) {
    const long start = f * kHop;
    const long len = std::min<long>(kWin, x.size() - start);
    if (len <= 2 * lag_min) continue;
    const Vec frame = x.segment(start, len);
    if (std::sqrt(frame.square().mean()) < kSilenceRms) continue;

    double best_r = 0.0;
    long best_lag = 0;
    const long hi = std::min(lag_max, len - 1);
    Vec r(hi + 1);
    r.setZero();
    for (long lag = lag_min; lag <= hi; ++lag) {
      const long n = len - lag;
      const double num = (frame.head(n) * frame.segment(lag, n)).sum();
      const double den =
          std::sqrt(frame.head(n).square().sum() * frame.segment(lag, n).square().sum());
      r[lag] = den > 0 ? num / den : 0.0;
      if (r[lag] > best_r) { best_r = r[lag]; best_lag = lag; }
    }
    track.confidence[f] = best_r;
    if (best_r < kVoicingThreshold || best_lag == 0) continue;

    // subharmonic guard: multiples of the true period score near-identical
    // peaks (exactly 1 for pure tones), and a slightly better-aligned
    // multiple can beat the fundamental. Prefer the shortest local maximum
    // within 10% of the global peak.
    for (long lag = lag_min + 1; lag < best_lag; ++lag) {
      if (r[lag] >= 0.9 * best_r && r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1]) {
        best_lag = lag;
        break;
      }
    }

    // parabolic refinement around the peak lag
    double lag = static_cast<double>(best_lag);
    if (best_lag > lag_min && best_lag < hi) {
      const double a = r[best_lag - 1], b = r[best_lag], c = r[best_lag + 1];
      const double denom = a - 2 * b + c;
      if (std::abs(denom) > 1e-12) lag += 0.5 * (a - c) / denom;
    }
    const double f0 = sample_rate / lag;
    if (f0 >= kF0Min && f0 <= kF0Max) track.f0[f] = f0;
  }
  return track;
}

double f0_rmse(const F0Track& ref, const F0Track& est, bool* empty_overlap) {
  if (ref.f0.size() != est.f0.size()) throw std::invalid_argument("f0_rmse: frame counts differ");
  double acc = 0.0;
  long n = 0;
  for (long i = 0; i < ref.f0.size(); ++i)
    if (ref.f0[i] > 0 && est.f0[i] > 0) {
      const double d = ref.f0[i] - est.f0[i];
      acc += d * d;
      ++n;
    }
  if (empty_overlap) *empty_overlap = n == 0;
  return n == 0 ? 0.0 : std::sqrt(acc / n);
}

std::pair<double, double> vuv_rates(const F0Track& ref, const F0Track& est) {
  if (ref.f0.size() != est.f0.size()) throw std::invalid_argument("vuv_rates: frame counts differ");
  long fp = 0, fn = 0, ref_unvoiced = 0, ref_voiced = 0;
  for (long i = 0; i < ref.f0.size(); ++i) {
    const bool rv = ref.f0[i] > 0, ev = est.f0[i] > 0;
    if (rv) {
      ++ref_voiced;
      if (!ev) ++fn;
    } else {
      ++ref_unvoiced;
      if (ev) ++fp;
    }
  }
  const double fpr = ref_unvoiced == 0 ? 0.0 : 100.0 * fp / ref_unvoiced;
  const double fnr = ref_voiced == 0 ? 0.0 : 100.0 * fn / ref_voiced;
  return {fpr, fnr};
}

double mcd_from_logmel(const Eigen::ArrayXXd& mx, const Eigen::ArrayXXd& my) {
  if (mx.rows() != my.rows() || mx.cols() != my.cols())
    throw std::invalid_argument("mcd: raster shapes differ");
  const int n_mels = static_cast<int>(mx.rows());
  const long F = mx.cols();
  constexpr int kCep = 13;  // c1..c13

  // DCT-II basis rows for coefficients 1..13
  Eigen::MatrixXd dct(kCep, n_mels);
  for (int i = 1; i <= kCep; ++i)
    for (int j = 0; j < n_mels; ++j)
      dct(i - 1, j) = std::cos(M_PI * i * (j + 0.5) / n_mels) * std::sqrt(2.0 / n_mels);

  const Eigen::MatrixXd cx = dct * mx.matrix();
  const Eigen::MatrixXd cy = dct * my.matrix();
  double acc = 0.0;
  for (long f = 0; f < F; ++f) acc += (cx.col(f) - cy.col(f)).norm();
  return (10.0 / std::log(10.0)) * std::sqrt(2.0) * acc / F;
}

double mcd(const Vec& x, const Vec& y, int sample_rate) {
  if (x.size() != y.size()) throw std::invalid_argument("mcd: lengths differ");
  return mcd_from_logmel(log_mel(x, sample_rate), log_mel(y, sample_rate));
}

double spec_ssim(const Vec& x, const Vec& y, int sample_rate) {
  if (x.size() != y.size()) throw std::invalid_argument("spec_ssim: lengths differ");
  const Eigen::ArrayXXd a = log_mel(x, sample_rate);
  const Eigen::ArrayXXd b = log_mel(y, sample_rate);
  const int w = 7;
  if (a.rows() < w || a.cols() < w) throw std::invalid_argument("spec_ssim: raster too small");

  const double range =
      std::max(a.maxCoeff(), b.maxCoeff()) - std::min(a.minCoeff(), b.minCoeff());
  const double L = range > 0 ? range : 1.0;
  const double c1 = (0.01 * L) * (0.01 * L);
  const double c2 = (0.03 * L) * (0.03 * L);

  double acc = 0.0;
  long n = 0;
  for (long i = 0; i + w <= a.rows(); ++i)
    for (long j = 0; j + w <= a.cols(); ++j) {
      const auto pa = a.block(i, j, w, w);
      const auto pb = b.block(i, j, w, w);
      const double mu_a = pa.mean(), mu_b = pb.mean();
      const double var_a = (pa - mu_a).square().mean();
      const double var_b = (pb - mu_b).square().mean();
      const double cov = ((pa - mu_a) * (pb - mu_b)).mean();
      acc += ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
             ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      ++n;
    }
  return acc / n;
}

}  // namespace avocodo::metrics
