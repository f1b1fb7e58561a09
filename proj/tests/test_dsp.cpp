#include "avocodo/dsp.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <cmath>
#include <complex>

using namespace avocodo;

TEST_CASE("hann window is periodic and matches the closed form") {
  const int n = 64;
  dsp::Vec w = dsp::hann_window(n);
  REQUIRE(w.size() == n);
  CHECK(w(0) == doctest::Approx(0.0));
  CHECK(w(n / 2) == doctest::Approx(1.0));
  for (int i = 0; i < n; ++i)
    CHECK(w(i) == doctest::Approx(0.5 * (1.0 - std::cos(2.0 * M_PI * i / n))).epsilon(1e-12));
}

TEST_CASE("kaiser window: beta 0 is rectangular, otherwise symmetric bell") {
  dsp::Vec rect = dsp::kaiser_window(33, 0.0);
  CHECK((rect - 1.0).abs().maxCoeff() < 1e-12);

  dsp::Vec w = dsp::kaiser_window(33, 8.0);
  for (int i = 0; i < 33; ++i) CHECK(w(i) == doctest::Approx(w(32 - i)).epsilon(1e-12));
  CHECK(w(16) == doctest::Approx(1.0));
  CHECK(w(0) < 0.01);  // beta 8 endpoints are ~1/I0(8)
}

TEST_CASE("bessel_i0 reference values") {
  CHECK(dsp::bessel_i0(0.0) == doctest::Approx(1.0));
  CHECK(dsp::bessel_i0(1.0) == doctest::Approx(1.2660658777520084));
  CHECK(dsp::bessel_i0(5.0) == doctest::Approx(27.239871823604442).epsilon(1e-10));
}

TEST_CASE("rfft matches a direct DFT") {
  const int n = 16;
  dsp::Vec x = testutil::white_noise(n, 11);
  dsp::CVec spec = dsp::rfft(x, n);
  REQUIRE(spec.size() == n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    std::complex<double> acc(0, 0);
    for (int t = 0; t < n; ++t)
      acc += x(t) * std::exp(std::complex<double>(0, -2.0 * M_PI * k * t / n));
    CHECK(std::abs(spec(k) - acc) < 1e-9);
  }
}

TEST_CASE("rfft zero-pads to nfft") {
  dsp::Vec x = testutil::white_noise(10, 3);
  dsp::CVec a = dsp::rfft(x, 32);
  dsp::Vec padded = dsp::Vec::Zero(32);
  padded.head(10) = x;
  dsp::CVec b = dsp::rfft(padded, 32);
  CHECK((a - b).abs().maxCoeff() < 1e-12);
}

TEST_CASE("band energy separates a tone from its stopband") {
  dsp::Vec x = testutil::tone(1000.0, 22050.0, 22050);
  const double in_band = dsp::band_energy_db(x, 950, 1050, 22050);
  const double out_band = dsp::band_energy_db(x, 5000, 6000, 22050);
  CHECK(in_band - out_band > 60.0);
}

TEST_CASE("band energy floors on silence and empty bands") {
  dsp::Vec z = dsp::Vec::Zero(4096);
  CHECK(dsp::band_energy_db(z, 100, 200, 22050) == doctest::Approx(dsp::db_floor()));
  CHECK(dsp::energy_db(z) == doctest::Approx(dsp::db_floor()));
}

TEST_CASE("dominant_frequency finds a pure tone") {
  dsp::Vec x = testutil::tone(3000.0, 22050.0, 22050);
  CHECK(std::abs(dsp::dominant_frequency(x, 22050.0) - 3000.0) < 2.0);
}

TEST_CASE("convolve matches the triple-loop definition") {
  dsp::Vec x = testutil::white_noise(9, 5);
  dsp::Vec h = testutil::white_noise(4, 6);
  dsp::Vec y = dsp::convolve(x, h);
  REQUIRE(y.size() == 12);
  for (int n = 0; n < 12; ++n) {
    double acc = 0;
    for (int k = 0; k < 4; ++k) {
      const int idx = n - k;
      if (idx >= 0 && idx < 9) acc += h(k) * x(idx);
    }
    CHECK(y(n) == doctest::Approx(acc).epsilon(1e-12));
  }
}
