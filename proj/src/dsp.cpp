#include "avocodo/dsp.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace avocodo::dsp {

namespace {
constexpr double kPi = std::numbers::pi;
}

Vec hann_window(int n) {
  Vec w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / n);
  return w;
}

double bessel_i0(double x) {
  // Power series; converges quickly for the beta range used here.
  double sum = 1.0, term = 1.0;
  const double y = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= y / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

Vec kaiser_window(int n, double beta) {
  Vec w(n);
  const double denom = bessel_i0(beta);
  const double m = (n - 1) / 2.0;
  for (int i = 0; i < n; ++i) {
    const double r = (i - m) / m;
    w[i] = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
  }
  return w;
}

CVec rfft(const Vec& x, int nfft) {
  std::vector<double> buf(nfft, 0.0);
  const int n = std::min<int>(nfft, static_cast<int>(x.size()));
  for (int i = 0; i < n; ++i) buf[i] = x[i];
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, buf);
  CVec out(nfft / 2 + 1);
  for (int i = 0; i <= nfft / 2; ++i) out[i] = spec[i];
  return out;
}

Vec welch_psd(const Vec& x, int segment, int hop) {
  if (x.size() == 0) throw std::invalid_argument("welch_psd: empty signal");
  const Vec win = hann_window(segment);
  const double win_norm = (win * win).sum();
  Vec psd = Vec::Zero(segment / 2 + 1);
  int count = 0;
  for (long start = 0; start + segment <= x.size() || count == 0; start += hop) {
    Vec frame = Vec::Zero(segment);
    const long avail = std::min<long>(segment, x.size() - start);
    if (avail <= 0) break;
    frame.head(avail) = x.segment(start, avail);
    frame *= win;
    CVec spec = rfft(frame, segment);
    psd += spec.abs2() / win_norm;
    ++count;
    if (start + segment >= x.size()) break;
  }
  return psd / std::max(count, 1);
}

double band_energy_db(const Vec& x, double f_lo, double f_hi, double sample_rate) {
  if (x.size() == 0) throw std::invalid_argument("band_energy_db: empty signal");
  if (!(f_lo >= 0.0 && f_lo < f_hi && f_hi <= sample_rate / 2.0 + 1e-9))
    throw std::invalid_argument("band_energy_db: bad band edges");
  const int segment = std::min<long>(1024, x.size());
  Vec psd = welch_psd(x, segment, segment / 4);
  const double bin_hz = sample_rate / segment;
  double e = 0.0;
  for (int i = 0; i < psd.size(); ++i) {
    const double f = i * bin_hz;
    if (f >= f_lo && f <= f_hi) e += psd[i];
  }
  if (e <= 0.0) return db_floor();
  return std::max(db_floor(), 10.0 * std::log10(e));
}

double dominant_frequency(const Vec& x, double sample_rate) {
  int nfft = 1;
  while (nfft < x.size()) nfft <<= 1;
  nfft = std::max(nfft, 1024);
  CVec spec = rfft(x, nfft);
  int best = 0;
  double best_mag = -1.0;
  for (int i = 0; i < spec.size(); ++i) {
    const double m = std::abs(spec[i]);
    if (m > best_mag) { best_mag = m; best = i; }
  }
  return best * sample_rate / nfft;
}

double energy_db(const Vec& x) {
  const double e = (x * x).sum();
  if (e <= 0.0) return db_floor();
  return std::max(db_floor(), 10.0 * std::log10(e));
}

Vec convolve(const Vec& x, const Vec& h) {
  Vec y = Vec::Zero(x.size() + h.size() - 1);
  for (long i = 0; i < h.size(); ++i)
    if (h[i] != 0.0) y.segment(i, x.size()) += h[i] * x;
  return y;
}

}  // namespace avocodo::dsp
