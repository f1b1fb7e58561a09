#include "avocodo/pqmf.hpp"

#include "avocodo/dsp.hpp"
#include "avocodo/nn.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace avocodo::pqmf {

namespace {
constexpr double kPi = std::numbers::pi;
using Cplx = std::complex<double>;
using CArr = Eigen::ArrayXcd;
}  // namespace

void PrototypeSpec::validate() const {
  if (taps <= 0) throw std::invalid_argument("PrototypeSpec: taps must be positive");
  if (!(cutoff_ratio > 0.0 && cutoff_ratio < 0.5))
    throw std::invalid_argument("PrototypeSpec: cutoff_ratio must be in (0, 0.5)");
  if (beta < 0.0) throw std::invalid_argument("PrototypeSpec: beta must be >= 0");
}

PrototypeSpec PrototypeSpec::for_bands(int n_bands) {
  switch (n_bands) {
    case 2:  return {256, 0.25, 10.0};
    case 4:  return {192, 0.13, 10.0};
    case 16: return {256, 0.03, 10.0};
    case 64: return {256, 0.1, 9.0};
    default: return {256, 1.0 / (2.0 * n_bands), 10.0};
  }
}

Vec design_prototype(const PrototypeSpec& spec) {
  spec.validate();
  const int len = spec.taps + 1;
  const double m = spec.taps / 2.0;
  const double wc = kPi * spec.cutoff_ratio;  // cutoff as fraction of fs/2 maps to [0, pi]
  Vec h(len);
  for (int n = 0; n < len; ++n) {
    const double x = n - m;
    h[n] = (x == 0.0) ? spec.cutoff_ratio : std::sin(wc * x) / (kPi * x);
  }
  return h * dsp::kaiser_window(len, spec.beta);
}

namespace {

// Cosine modulation tables: analysis uses +(-1)^k pi/4 phase, synthesis -(-1)^k.
void modulation(int n_bands, int taps, Mat& cos_a, Mat& cos_s) {
  const int len = taps + 1;
  cos_a.resize(n_bands, len);
  cos_s.resize(n_bands, len);
  for (int k = 0; k < n_bands; ++k) {
    const double phase = ((k % 2 == 0) ? 1.0 : -1.0) * kPi / 4.0;
    for (int n = 0; n < len; ++n) {
      const double arg = (2 * k + 1) * kPi / (2.0 * n_bands) * (n - taps / 2.0);
      cos_a(k, n) = std::cos(arg + phase);
      cos_s(k, n) = std::cos(arg - phase);
    }
  }
}

void modulate(const Vec& h, const Mat& cos_a, const Mat& cos_s, Mat& analysis, Mat& synthesis) {
  analysis = 2.0 * (cos_a.rowwise() * h.transpose());
  synthesis = 2.0 * (cos_s.rowwise() * h.transpose());
}

CArr fft_padded(Eigen::FFT<double>& fft, const Vec& x, int nfft) {
  std::vector<Cplx> in(nfft, Cplx(0.0, 0.0));
  for (long i = 0; i < x.size(); ++i) in[static_cast<size_t>(i)] = Cplx(x[i], 0.0);
  std::vector<Cplx> out(nfft);
  fft.fwd(out.data(), in.data(), nfft);
  return Eigen::Map<CArr>(out.data(), nfft);
}

// Re(FFT(q)[n]) for n = 0..len-1; the adjoint of fft_padded for real inputs.
Vec fft_real_head(Eigen::FFT<double>& fft, const CArr& q, int len) {
  const int nfft = static_cast<int>(q.size());
  std::vector<Cplx> in(q.data(), q.data() + nfft), out(nfft);
  fft.fwd(out.data(), in.data(), nfft);
  Vec r(len);
  for (int n = 0; n < len; ++n) r[n] = out[static_cast<size_t>(n)].real();
  return r;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// c += a_rot * b where a_rot[j] = a[(j - off) mod n], via two segment ops.
void add_rotated_product(CArr& c, const CArr& a, const CArr& b, int off) {
  const long n = a.size();
  if (off == 0) { c += a * b; return; }
  c.tail(n - off) += a.head(n - off) * b.tail(n - off);
  c.head(off) += a.tail(off) * b.head(off);
}

// c_rot accumulation: c[(j - off) mod n] += a[j] * b[j].
void add_product_rotated(CArr& c, const CArr& a, const CArr& b, int off) {
  const long n = a.size();
  if (off == 0) { c += a * b; return; }
  c.head(n - off) += a.tail(n - off) * b.tail(n - off);
  c.tail(off) += a.head(off) * b.head(off);
}

struct CascadeObjective {
  int n_bands, taps, len, nfft, shift;
  Mat cos_a, cos_s;
  CArr target;
  Vec stop_mask;
  double lambda_stop = 10.0;
  Eigen::FFT<double> fft;
  // pairs[l] lists the bands whose image at shift l*2pi/N spectrally overlaps
  // the band itself; all other (l, k) products are identically negligible
  // because the stopband penalty keeps each filter inside its slot.
  std::vector<std::vector<int>> pairs;

  CascadeObjective(int n_bands_, int taps_) : n_bands(n_bands_), taps(taps_) {
    len = taps + 1;
    nfft = 1024;
    while (nfft < 2 * len) nfft <<= 1;  // products of two len-long spectra fit
    shift = nfft / n_bands;
    modulation(n_bands, taps, cos_a, cos_s);
    target.resize(nfft);
    stop_mask = Vec::Zero(nfft);
    const double stop_edge = kPi / (2.0 * n_bands) + 1.2 * kPi / n_bands;
    for (int j = 0; j < nfft; ++j) {
      const double w = 2.0 * kPi * j / nfft;
      target[j] = std::exp(Cplx(0.0, -w * taps));
      if (w > stop_edge && w < 2.0 * kPi - stop_edge) stop_mask[j] = 1.0;
    }

    pairs.assign(n_bands, {});
    const double ws = 2.0 * kPi / n_bands;
    const double half_width = stop_edge;  // conservative per-lobe support
    auto circ_near = [&](double a, double b) {
      double d = std::fmod(std::abs(a - b), 2.0 * kPi);
      d = std::min(d, 2.0 * kPi - d);
      return d <= 2.0 * half_width;
    };
    for (int l = 0; l < n_bands; ++l)
      for (int k = 0; k < n_bands; ++k) {
        const double wk = (2 * k + 1) * kPi / (2 * n_bands);
        bool hit = false;
        for (double sa : {wk, -wk})
          for (double sb : {wk, -wk})
            if (circ_near(sa + l * ws, sb)) hit = true;
        if (hit) pairs[l].push_back(k);
      }
  }

  // j_alias = sum_l mean_j |E_l|^2; grad (if non-null) gets dJ/dh including
  // the stopband penalty. Predicted white-noise SNR = -10 log10(j_alias).
  double eval(const Vec& h, Vec* grad) {
    std::vector<CArr> H(n_bands), G(n_bands);
    for (int k = 0; k < n_bands; ++k) {
      H[k] = fft_padded(fft, 2.0 * h * cos_a.row(k).transpose(), nfft);
      G[k] = fft_padded(fft, 2.0 * h * cos_s.row(k).transpose(), nfft);
    }
    std::vector<CArr> E(n_bands);
    double j_alias = 0.0;
    for (int l = 0; l < n_bands; ++l) {
      if (pairs[l].empty() && l != 0) continue;
      const int off = (l * shift) % nfft;
      CArr T = CArr::Zero(nfft);
      for (int k : pairs[l]) add_rotated_product(T, H[k], G[k], off);
      if (l == 0) T -= target;
      E[l] = T;
      j_alias += T.abs2().mean();
    }
    if (!grad) return j_alias;

    *grad = Vec::Zero(len);
    std::vector<CArr> qh(n_bands), qg(n_bands);
    for (int k = 0; k < n_bands; ++k) {
      qh[k] = CArr::Zero(nfft);
      qg[k] = CArr::Zero(nfft);
    }
    for (int l = 0; l < n_bands; ++l) {
      if (pairs[l].empty()) continue;
      const int off = (l * shift) % nfft;
      const CArr Ec = E[l].conjugate();
      for (int k : pairs[l]) {
        add_rotated_product(qg[k], H[k], Ec, off);
        add_product_rotated(qh[k], G[k], Ec, off);
      }
    }
    for (int k = 0; k < n_bands; ++k) {
      *grad += (2.0 / nfft) * fft_real_head(fft, qh[k], len) * 2.0 * cos_a.row(k).transpose();
      *grad += (2.0 / nfft) * fft_real_head(fft, qg[k], len) * 2.0 * cos_s.row(k).transpose();
    }
    CArr P = fft_padded(fft, h, nfft);
    CArr qs = (lambda_stop / nfft) * stop_mask.cast<Cplx>() * P.conjugate();
    *grad += 2.0 * fft_real_head(fft, qs, len);
    return j_alias;
  }
};

// Widest Kaiser beta whose transition still fits inside one band spacing.
double feasible_beta(int taps, int n_bands, double requested) {
  const double atten = 8.0 + 2.285 * taps * (kPi / n_bands);
  double beta;
  if (atten > 50.0) beta = 0.1102 * (atten - 8.7);
  else if (atten > 21.0) beta = 0.5842 * std::pow(atten - 21.0, 0.4) + 0.07886 * (atten - 21.0);
  else beta = 0.0;
  return std::min(requested, beta);
}

// Tunes the prototype so the full analysis/synthesis cascade is close to a
// pure delay: minimizes |T_0 - e^{-jwD}|^2 plus the alias transfer |T_l|^2
// plus a stopband energy penalty, by Adam over the (symmetric) impulse
// response. Gradients flow through the FFTs analytically. The Kaiser spec
// seeds the search; beta is capped and the cutoff grid-tuned first so the
// descent starts from a bank that already roughly tiles the spectrum.
Vec refine_prototype(const PrototypeSpec& spec, int n_bands) {
  const int taps = spec.taps;
  const int len = taps + 1;
  CascadeObjective obj(n_bands, taps);

  PrototypeSpec init = spec;
  init.beta = feasible_beta(taps, n_bands, spec.beta);
  double best_j = std::numeric_limits<double>::infinity();
  Vec h;
  for (double mult = 1.0; mult <= 1.45; mult += 0.05) {
    init.cutoff_ratio = mult / (2.0 * n_bands);
    Vec cand = design_prototype(init);
    const double j = obj.eval(cand, nullptr);
    if (j < best_j) { best_j = j; h = cand; }
  }

  Vec m_adam = Vec::Zero(len), v_adam = Vec::Zero(len);
  const double lr0 = 3e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  const int max_iters = 2000;
  const bool trace = std::getenv("PQMF_TRACE") != nullptr;
  best_j = std::numeric_limits<double>::infinity();
  int best_it = 0;
  for (int it = 1; it <= max_iters; ++it) {
    Vec grad;
    const double j_alias = obj.eval(h, &grad);
    if (trace && it % 100 == 1)
      std::fprintf(stderr, "N=%d it=%d j=%.3g (%.1f dB)\n", n_bands, it, j_alias,
                   -10.0 * std::log10(j_alias));
    if (j_alias < best_j * (1.0 - 1e-3)) { best_j = j_alias; best_it = it; }
    // stop at ample margin over the 40 dB reconstruction contract, or plateau
    if (it > 50 && (j_alias < 1e-6 || it - best_it > 100)) break;
    const double lr = lr0 * std::pow(0.998, it);
    for (int n = 0; n < len; ++n) {
      m_adam[n] = beta1 * m_adam[n] + (1 - beta1) * grad[n];
      v_adam[n] = beta2 * v_adam[n] + (1 - beta2) * grad[n] * grad[n];
      const double mh = m_adam[n] / (1 - std::pow(beta1, it));
      const double vh = v_adam[n] / (1 - std::pow(beta2, it));
      h[n] -= lr * mh / (std::sqrt(vh) + eps);
    }
    h = 0.5 * (h + h.reverse()).eval();
  }
  return h;
}

}  // namespace

PqmfBank build_bank(int n_bands, const PrototypeSpec& spec, bool refine) {
  if (n_bands < 2) throw std::invalid_argument("build_bank: n_bands must be >= 2");
  Vec h = design_prototype(spec);
  if (refine && is_power_of_two(n_bands)) h = refine_prototype(spec, n_bands);

  PqmfBank bank;
  bank.n_bands = n_bands;
  bank.group_delay = spec.taps;
  Mat cos_a, cos_s;
  modulation(n_bands, spec.taps, cos_a, cos_s);
  modulate(h, cos_a, cos_s, bank.analysis, bank.synthesis);

  // Normalize so the cascade passband gain is 1: T_0(0) = sum_k H_k(0) G_k(0).
  double t0 = 0.0;
  for (int k = 0; k < n_bands; ++k)
    t0 += bank.analysis.row(k).sum() * bank.synthesis.row(k).sum();
  if (t0 <= 0.0) throw std::runtime_error("build_bank: degenerate cascade gain");
  h /= std::sqrt(t0);
  modulate(h, cos_a, cos_s, bank.analysis, bank.synthesis);
  bank.prototype = h;
  bank.dc_gain = h.sum();
  return bank;
}

PqmfBank build_bank(int n_bands) { return build_bank(n_bands, PrototypeSpec::for_bands(n_bands)); }

SubbandSignals analyze(const PqmfBank& bank, const Vec& x, double sample_rate) {
  if (x.size() == 0) throw std::invalid_argument("analyze: empty input");
  const int N = bank.n_bands;
  const int taps = bank.taps();
  const long T = (x.size() / N) * N;  // truncate to a multiple of N
  if (T == 0) throw std::invalid_argument("analyze: input shorter than one band sample");

  SubbandSignals out;
  out.n_bands = N;
  out.length_per_band = T / N;
  out.sample_rate_per_band = sample_rate / N;
  out.data.resize(N, out.length_per_band);
  // b_k[m] = sum_i H_k[i] x[mN - i]
  for (int k = 0; k < N; ++k) {
    for (long mth = 0; mth < out.length_per_band; ++mth) {
      const long t = mth * N;
      double acc = 0.0;
      const long i_hi = std::min<long>(taps, t);
      for (long i = 0; i <= i_hi; ++i) acc += bank.analysis(k, i) * x[t - i];
      out.data(k, mth) = acc;
    }
  }
  return out;
}

ad::Var analyze_ad(const PqmfBank& bank, const ad::Var& x) {
  if (x->rows() != 1) throw std::invalid_argument("analyze_ad: expected 1 x T input");
  const int N = bank.n_bands;
  const int taps = bank.taps();
  const long T = (x->cols() / N) * N;
  if (T == 0) throw std::invalid_argument("analyze_ad: empty input");
  ad::Var xin = (T == x->cols())
                    ? x
                    : ad::transpose(ad::slice_rows(ad::transpose(x), 0, T));

  // correlation with reversed filters == convolution with the filters
  ad::Array w(N, taps + 1);
  for (int k = 0; k < N; ++k)
    for (int i = 0; i <= taps; ++i) w(k, i) = bank.analysis(k, taps - i);
  nn::ConvOpts o;
  o.stride = N;
  o.pad_left = taps;
  o.pad_right = 0;
  return nn::conv1d_raw(xin, ad::constant(w), nullptr, taps + 1, o);
}

Vec synthesize(const PqmfBank& bank, const SubbandSignals& subbands) {
  if (subbands.n_bands != bank.n_bands)
    throw std::invalid_argument("synthesize: band-count mismatch");
  const int N = bank.n_bands;
  const int taps = bank.taps();
  const long T = subbands.length_per_band * N;
  Vec y = Vec::Zero(T);
  for (int k = 0; k < N; ++k) {
    for (long mth = 0; mth < subbands.length_per_band; ++mth) {
      const double s = subbands.data(k, mth);
      if (s == 0.0) continue;
      const long t0 = mth * N;
      const long i_hi = std::min<long>(taps, T - 1 - t0);
      for (long i = 0; i <= i_hi; ++i) y[t0 + i] += s * bank.synthesis(k, i);
    }
  }
  return N * y;
}

Vec lowpass_downsample(const PqmfBank& bank, const Vec& x) {
  SubbandSignals b = analyze(bank, x);
  return b.data.row(0).transpose();
}

ad::Var lowpass_downsample_ad(const PqmfBank& bank, const ad::Var& x) {
  return ad::slice_rows(analyze_ad(bank, x), 0, 1);
}

double reconstruction_snr_db(const PqmfBank& bank, const Vec& x) {
  SubbandSignals b = analyze(bank, x);
  Vec y = synthesize(bank, b);
  const long d = bank.group_delay;
  const long n = std::min<long>(x.size(), y.size()) - d;
  if (n <= 0) throw std::invalid_argument("reconstruction_snr_db: signal too short");
  Vec a = x.head(n);
  Vec r = a - y.segment(d, n);
  const double sig = (a * a).sum();
  const double err = std::max((r * r).sum(), 1e-300);
  return 10.0 * std::log10(sig / err);
}

const PqmfBank& cached_bank(int n_bands) {
  static std::mutex mu;
  static std::map<int, PqmfBank> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n_bands);
  if (it == cache.end()) it = cache.emplace(n_bands, build_bank(n_bands)).first;
  return it->second;
}

}  // namespace avocodo::pqmf
