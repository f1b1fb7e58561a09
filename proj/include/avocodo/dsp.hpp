#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

// Shared DSP primitives: windows, FFT helpers, spectral measurements.
namespace avocodo::dsp {

using Vec = Eigen::ArrayXd;
using CVec = Eigen::ArrayXcd;

/// Periodic Hann window of length n.
Vec hann_window(int n);

/// Kaiser window of length n with shape parameter beta (beta = 0 -> rectangular).
Vec kaiser_window(int n, double beta);

/// Zeroth-order modified Bessel function of the first kind.
double bessel_i0(double x);

/// Complex spectrum of x zero-padded to nfft (bins 0..nfft/2 inclusive).
CVec rfft(const Vec& x, int nfft);

/// Power spectral density estimate, Welch method, Hann window.
/// Returns nfft/2+1 bins; each bin is mean periodogram power.
Vec welch_psd(const Vec& x, int segment = 1024, int hop = 256);

/// Energy of x in [f_lo, f_hi] Hz, in dB, from a Welch estimate.
/// Empty band or silent input reports the floor (-120 dB).
double band_energy_db(const Vec& x, double f_lo, double f_hi, double sample_rate);

/// Frequency (Hz) of the strongest rfft bin of x.
double dominant_frequency(const Vec& x, double sample_rate);

/// 10*log10 of total energy with a -120 dB floor.
double energy_db(const Vec& x);

/// Linear convolution, output length x.size() + h.size() - 1.
Vec convolve(const Vec& x, const Vec& h);

inline double db_floor() { return -120.0; }

}  // namespace avocodo::dsp
