#include "avocodo/stft.hpp"

#include "avocodo/dsp.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <tuple>

namespace avocodo::features {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMagEps = 1e-9;   // keeps sqrt differentiable at 0
constexpr double kLogFloor = 1e-5;

// Reflection index without edge repetition: ...x2 x1 | x0 x1 ... x_{T-1} | x_{T-2}...
long reflect(long i, long T) {
  if (T == 1) return 0;
  while (i < 0 || i >= T) {
    if (i < 0) i = -i;
    if (i >= T) i = 2 * T - 2 - i;
  }
  return i;
}

// Frame index table: idx(n, f) = source sample of frame f, in-frame offset n,
// with (win - hop)/2 reflection padding on each side.
Eigen::ArrayXXi frame_indices(long T, const StftConfig& cfg, long* n_frames) {
  const long pad = (cfg.win_size - cfg.hop_size) / 2;
  const long padded = T + 2 * pad;
  if (padded < cfg.win_size) throw std::invalid_argument("stft: signal too short");
  const long F = (padded - cfg.win_size) / cfg.hop_size + 1;
  Eigen::ArrayXXi idx(cfg.win_size, F);
  for (long f = 0; f < F; ++f)
    for (long n = 0; n < cfg.win_size; ++n)
      idx(n, f) = static_cast<int>(reflect(f * cfg.hop_size + n - pad, T));
  *n_frames = F;
  return idx;
}

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// Windowed DFT matrices: C(k, n) = cos(2*pi*k*n/fft) * hann(n), S likewise
// with -sin, for bins 0..fft/2.
void dft_matrices(const StftConfig& cfg, Mat& C, Mat& S) {
  const int bins = cfg.fft_size / 2 + 1;
  const Vec w = dsp::hann_window(cfg.win_size);
  C.resize(bins, cfg.win_size);
  S.resize(bins, cfg.win_size);
  for (int k = 0; k < bins; ++k)
    for (int n = 0; n < cfg.win_size; ++n) {
      const double ang = 2.0 * kPi * k * n / cfg.fft_size;
      C(k, n) = std::cos(ang) * w[n];
      S(k, n) = -std::sin(ang) * w[n];
    }
}

struct MelCacheKey {
  int n_mels, fft, sr;
  bool operator<(const MelCacheKey& o) const {
    return std::tie(n_mels, fft, sr) < std::tie(o.n_mels, o.fft, o.sr);
  }
};

const Mat& cached_mel_filterbank(int n_mels, int fft_size, int sample_rate) {
  static std::mutex mu;
  static std::map<MelCacheKey, Mat> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace({n_mels, fft_size, sample_rate});
  if (inserted) it->second = mel_filterbank(n_mels, fft_size, sample_rate);
  return it->second;
}

}  // namespace

void StftConfig::validate() const {
  if (fft_size <= 0 || win_size <= 0 || hop_size <= 0)
    throw std::invalid_argument("StftConfig: sizes must be positive");
  if (win_size > fft_size) throw std::invalid_argument("StftConfig: win > fft");
  if (hop_size > win_size) throw std::invalid_argument("StftConfig: hop > win");
}

Mat stft_magnitude(const Vec& x, const StftConfig& cfg) {
  cfg.validate();
  if (x.size() == 0) throw std::invalid_argument("stft_magnitude: empty input");
  long F = 0;
  const Eigen::ArrayXXi idx = frame_indices(x.size(), cfg, &F);
  const Vec w = dsp::hann_window(cfg.win_size);
  const int bins = cfg.fft_size / 2 + 1;
  Mat mag(bins, F);
  Vec frame(cfg.win_size);
  for (long f = 0; f < F; ++f) {
    for (int n = 0; n < cfg.win_size; ++n) frame[n] = x[idx(n, f)];
    dsp::CVec spec = dsp::rfft(frame * w, cfg.fft_size);
    mag.col(f) = (spec.abs2() + kMagEps).sqrt();
  }
  return mag;
}

Mat mel_filterbank(int n_mels, int fft_size, double sample_rate) {
  const int bins = fft_size / 2 + 1;
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  Vec edges(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i) edges[i] = mel_to_hz(mel_max * i / (n_mels + 1));
  Mat fb = Mat::Zero(n_mels, bins);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = k * sample_rate / fft_size;
      if (f > lo && f < mid) fb(m, k) = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi) fb(m, k) = (hi - f) / (hi - mid);
    }
  }
  return fb;
}

MelSpectrogram mel_spectrogram(const Vec& x, const StftConfig& cfg, int sample_rate, int n_mels) {
  const Mat mag = stft_magnitude(x, cfg);
  const Mat& fb = cached_mel_filterbank(n_mels, cfg.fft_size, sample_rate);
  MelSpectrogram mel;
  mel.n_mels = n_mels;
  mel.sample_rate = sample_rate;
  mel.values = (fb.matrix() * mag.matrix()).array().max(kLogFloor).log();
  return mel;
}

ad::Var log_mel_ad(const ad::Var& x, const StftConfig& cfg, int sample_rate, int n_mels) {
  cfg.validate();
  if (x->rows() != 1) throw std::invalid_argument("log_mel_ad: x must be 1 x T");
  long F = 0;
  const Eigen::ArrayXXi idx = frame_indices(x->cols(), cfg, &F);

  static std::mutex mu;
  static std::map<std::pair<int, int>, std::pair<Mat, Mat>> dft_cache;
  ad::Var C, S;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = dft_cache.try_emplace({cfg.fft_size, cfg.win_size});
    if (inserted) dft_matrices(cfg, it->second.first, it->second.second);
    C = ad::constant(it->second.first);
    S = ad::constant(it->second.second);
  }

  ad::Var frames = ad::gather_time(x, idx);           // win x F
  ad::Var re = ad::matmul(C, frames);                 // bins x F
  ad::Var im = ad::matmul(S, frames);
  ad::Var mag = ad::sqrt_eps(ad::add(ad::mul(re, re), ad::mul(im, im)), kMagEps);
  ad::Var mel = ad::matmul(ad::constant(cached_mel_filterbank(n_mels, cfg.fft_size, sample_rate)), mag);
  return ad::log_floor(mel, kLogFloor);
}

std::pair<Vec, MelSpectrogram> random_segment(const Vec& x, long seg_len, uint64_t seed,
                                              const StftConfig& cfg, int sample_rate) {
  if (seg_len <= 0) throw std::invalid_argument("random_segment: seg_len must be positive");
  Vec seg = Vec::Zero(seg_len);
  if (x.size() <= seg_len) {
    seg.head(x.size()) = x;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(0, x.size() - seg_len);
    seg = x.segment(dist(rng), seg_len);
  }
  return {seg, mel_spectrogram(seg, cfg, sample_rate)};
}

}  // namespace avocodo::features
