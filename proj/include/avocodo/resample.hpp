#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

namespace avocodo::resample {

using Vec = Eigen::ArrayXd;

enum class Method { equally_spaced, average_pool, pqmf };

Method method_from_string(const std::string& s);  // "esds" | "avgpool" | "pqmf"
std::string to_string(Method m);

struct ResampleReport {
  Method method = Method::equally_spaced;
  int factor = 0;
  double alias_energy_db = 0;         // folded-tone band energy relative to the source tone
  double passband_distortion_db = 0;  // remaining out-of-band energy relative to the source
};

/// Decimates by `factor`: equally_spaced keeps every factor-th sample,
/// average_pool takes block means, pqmf the first band of an N=factor bank.
Vec downsample(const Vec& x, Method method, int factor);

/// y[n*factor] = x[n], zeros elsewhere; length factor * len(x).
Vec zero_stuff_upsample(const Vec& x, int factor);

/// Welch band energy in dB (segment 1024, hop 256, Hann).
double band_energy(const Vec& x, double f_lo, double f_hi, double sample_rate);

/// Synthesizes a 1 s tone, decimates with all three methods, measures the
/// energy at the folded frequency and the residual elsewhere, both relative
/// to the source tone level. Requires a tone above the post-decimation
/// Nyquist (that is what makes it fold).
std::array<ResampleReport, 3> alias_report(double f_tone, double f_s, int factor,
                                           double amplitude = 1.0);

}  // namespace avocodo::resample
