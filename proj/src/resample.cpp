#include "avocodo/resample.hpp"

#include "avocodo/dsp.hpp"
#include "avocodo/pqmf.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace avocodo::resample {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Folds f into the baseband [0, fs/2] of the target rate.
double folded_frequency(double f, double fs) {
  f = std::fmod(f, fs);
  if (f < 0) f += fs;
  return f > fs / 2 ? fs - f : f;
}

// Anti-aliasing bank for the demo path. Deliberately unrefined: the NPR
// tuning widens the prototype's cutoff to improve reconstruction, which
// leaks near the band edge; a plain Kaiser design keeps the stopband deep,
// and nothing here is ever resynthesized.
const pqmf::PqmfBank& antialias_bank(int factor) {
  static std::map<int, pqmf::PqmfBank> cache;
  auto it = cache.find(factor);
  if (it == cache.end()) {
    pqmf::PrototypeSpec spec;
    spec.taps = 256;
    spec.cutoff_ratio = 1.0 / (2.0 * factor);
    spec.beta = 10.0;
    it = cache.emplace(factor, pqmf::build_bank(factor, spec, /*refine=*/false)).first;
  }
  return it->second;
}
}  // namespace

Method method_from_string(const std::string& s) {
  if (s == "esds" || s == "equally_spaced") return Method::equally_spaced;
  if (s == "avgpool" || s == "average_pool") return Method::average_pool;
  if (s == "pqmf") return Method::pqmf;
  throw std::invalid_argument("unknown downsample method: " + s);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::equally_spaced: return "esds";
    case Method::average_pool: return "avgpool";
    case Method::pqmf: return "pqmf";
  }
  return "?";
}

Vec downsample(const Vec& x, Method method, int factor) {
  if (factor < 2) throw std::invalid_argument("downsample: factor must be >= 2");
  if (x.size() < factor) throw std::invalid_argument("downsample: signal shorter than factor");
  switch (method) {
    case Method::equally_spaced: {
      const long n = (x.size() - 1) / factor + 1;
      Vec y(n);
      for (long i = 0; i < n; ++i) y[i] = x[i * factor];
      return y;
    }
    case Method::average_pool: {
      const long n = x.size() / factor;
      Vec y(n);
      for (long i = 0; i < n; ++i) y[i] = x.segment(i * factor, factor).mean();
      return y;
    }
    case Method::pqmf:
      return pqmf::lowpass_downsample(antialias_bank(factor), x);
  }
  throw std::invalid_argument("downsample: unknown method");
}

Vec zero_stuff_upsample(const Vec& x, int factor) {
  if (factor < 2) throw std::invalid_argument("zero_stuff_upsample: factor must be >= 2");
  Vec y = Vec::Zero(x.size() * factor);
  for (long i = 0; i < x.size(); ++i) y[i * factor] = x[i];
  return y;
}

double band_energy(const Vec& x, double f_lo, double f_hi, double sample_rate) {
  return dsp::band_energy_db(x, f_lo, f_hi, sample_rate);
}

std::array<ResampleReport, 3> alias_report(double f_tone, double f_s, int factor,
                                           double amplitude) {
  if (factor < 2) throw std::invalid_argument("alias_report: factor must be >= 2");
  const double fs_out = f_s / factor;
  if (f_tone <= fs_out / 2)
    throw std::invalid_argument("alias_report: tone must exceed post-decimation Nyquist");

  const long T = static_cast<long>(f_s);  // 1 second
  Vec x(T);
  for (long n = 0; n < T; ++n) x[n] = amplitude * std::sin(2.0 * kPi * f_tone * n / f_s);

  const double half = 50.0;
  const double ref = dsp::band_energy_db(x, f_tone - half, f_tone + half, f_s);
  const double f_img = folded_frequency(f_tone, fs_out);
  const double lo = std::max(0.0, f_img - half);
  const double hi = std::min(fs_out / 2, f_img + half);

  std::array<ResampleReport, 3> out;
  const Method methods[3] = {Method::equally_spaced, Method::average_pool, Method::pqmf};
  for (int i = 0; i < 3; ++i) {
    const Vec y = downsample(x, methods[i], factor);
    ResampleReport r;
    r.method = methods[i];
    r.factor = factor;
    if (ref <= dsp::db_floor() + 1e-9) {
      r.alias_energy_db = dsp::db_floor();
      r.passband_distortion_db = dsp::db_floor();
    } else {
      const double band = dsp::band_energy_db(y, lo, hi, fs_out);
      const double total = dsp::band_energy_db(y, 0.0, fs_out / 2, fs_out);
      const double rest_lin =
          std::max(std::pow(10.0, total / 10.0) - std::pow(10.0, band / 10.0), 1e-30);
      r.alias_energy_db = band - ref;
      r.passband_distortion_db = std::max(10.0 * std::log10(rest_lin) - ref, dsp::db_floor());
    }
    out[i] = r;
  }
  return out;
}

}  // namespace avocodo::resample
