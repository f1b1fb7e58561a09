#include "avocodo/metrics.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <cmath>

using namespace avocodo;

TEST_CASE("pitch tracker locks onto pure tones") {
  for (double f : {110.0, 220.0, 440.0}) {
    metrics::F0Track t = metrics::extract_f0(testutil::tone(f, 22050, 22050));
    REQUIRE(t.voiced_count() > 0);
    for (long i = 0; i < t.f0.size(); ++i)
      if (t.f0(i) > 0) CHECK(std::abs(t.f0(i) - f) < 2.0);
  }
}

TEST_CASE("silence and noise are unvoiced") {
  metrics::F0Track silence = metrics::extract_f0(Eigen::ArrayXd::Zero(8192));
  CHECK(silence.voiced_count() == 0);
  metrics::F0Track noise = metrics::extract_f0(testutil::white_noise(22050, 17));
  CHECK(static_cast<double>(noise.voiced_count()) / noise.f0.size() < 0.1);
}

TEST_CASE("f0_rmse of a semitone gap matches the closed form") {
  metrics::F0Track a = metrics::extract_f0(testutil::tone(220.0, 22050, 22050));
  metrics::F0Track b = metrics::extract_f0(testutil::tone(233.08, 22050, 22050));
  bool empty = false;
  const double rmse = metrics::f0_rmse(a, b, &empty);
  CHECK(!empty);
  CHECK(std::abs(rmse - 13.08) < 2.0);
  CHECK(metrics::f0_rmse(a, b) == doctest::Approx(metrics::f0_rmse(b, a)));  // symmetric
}

TEST_CASE("f0_rmse with no co-voiced frames reports zero and flags it") {
  metrics::F0Track voiced = metrics::extract_f0(testutil::tone(220.0, 22050, 8192));
  metrics::F0Track silent = metrics::extract_f0(Eigen::ArrayXd::Zero(8192));
  bool empty = false;
  CHECK(metrics::f0_rmse(voiced, silent, &empty) == 0.0);
  CHECK(empty);
}

TEST_CASE("vuv rates match a confusion-matrix brute force") {
  // synthetic tracks: only the voicing pattern matters
  auto track = [](std::initializer_list<int> voiced) {
    metrics::F0Track t;
    t.f0 = Eigen::ArrayXd::Zero(static_cast<long>(voiced.size()));
    t.confidence = Eigen::ArrayXd::Ones(static_cast<long>(voiced.size()));
    long i = 0;
    for (int v : voiced) t.f0(i++) = v ? 150.0 : 0.0;
    return t;
  };
  metrics::F0Track ref = track({1, 1, 0, 0, 1, 0, 1, 1});
  metrics::F0Track est = track({1, 0, 1, 0, 1, 1, 0, 1});
  // ref unvoiced: frames 2,3,5 -> est voiced at 2,5 -> fpr 2/3
  // ref voiced: frames 0,1,4,6,7 -> est unvoiced at 1,6 -> fnr 2/5
  auto [fpr, fnr] = metrics::vuv_rates(ref, est);
  CHECK(fpr == doctest::Approx(100.0 * 2.0 / 3.0));
  CHECK(fnr == doctest::Approx(100.0 * 2.0 / 5.0));

  // degenerate cases report 0 rather than dividing by zero
  auto [fpr2, fnr2] = metrics::vuv_rates(track({1, 1}), track({0, 0}));
  CHECK(fpr2 == 0.0);
  CHECK(fnr2 == 100.0);
  auto [fpr3, fnr3] = metrics::vuv_rates(track({0, 0}), track({1, 1}));
  CHECK(fpr3 == 100.0);
  CHECK(fnr3 == 0.0);
}

TEST_CASE("identical tracks give zero error everywhere") {
  Eigen::ArrayXd x = testutil::tone(196.0, 22050, 22050, 0.8);
  metrics::F0Track t = metrics::extract_f0(x);
  CHECK(metrics::f0_rmse(t, t) == 0.0);
  auto [fpr, fnr] = metrics::vuv_rates(t, t);
  CHECK(fpr == 0.0);
  CHECK(fnr == 0.0);
  CHECK(metrics::mcd(x, x) == 0.0);
  CHECK(metrics::spec_ssim(x, x) == doctest::Approx(1.0));
}

TEST_CASE("mcd of a single-cepstral-channel offset has a closed form") {
  // build a raster, then add delta along one DCT-II basis row: the cepstral
  // distance per frame is exactly delta
  Eigen::ArrayXXd mx = testutil::random_array(80, 12, 31);
  const int n = 80, k = 5;
  Eigen::ArrayXd basis(n);
  for (int i = 0; i < n; ++i)
    basis(i) = std::sqrt(2.0 / n) * std::cos(M_PI * k * (2.0 * i + 1.0) / (2.0 * n));
  const double delta = 0.37;
  Eigen::ArrayXXd my = mx;
  for (int f = 0; f < 12; ++f) my.col(f) += delta * basis;
  const double expected = (10.0 / std::log(10.0)) * std::sqrt(2.0) * delta;
  CHECK(metrics::mcd_from_logmel(mx, my) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(metrics::mcd_from_logmel(mx, mx) == 0.0);
}

TEST_CASE("mcd matches a per-frame brute force on random rasters") {
  Eigen::ArrayXXd mx = testutil::random_array(80, 9, 32);
  Eigen::ArrayXXd my = testutil::random_array(80, 9, 33);
  const int n = 80;
  Eigen::MatrixXd dct(13, n);
  for (int k = 1; k <= 13; ++k)
    for (int i = 0; i < n; ++i)
      dct(k - 1, i) = std::sqrt(2.0 / n) * std::cos(M_PI * k * (2.0 * i + 1.0) / (2.0 * n));
  double acc = 0.0;
  for (int f = 0; f < 9; ++f)
    acc += (dct * (mx.col(f) - my.col(f)).matrix()).norm();
  const double ref = (10.0 / std::log(10.0)) * std::sqrt(2.0) * acc / 9.0;
  CHECK(metrics::mcd_from_logmel(mx, my) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("spec_ssim matches the direct windowed formula") {
  Eigen::ArrayXd x = testutil::tone(440, 22050, 4096, 0.7);
  Eigen::ArrayXd y = testutil::white_noise(4096, 34, 0.4);
  const double got = metrics::spec_ssim(x, y);
  CHECK(got < 1.0);

  features::StftConfig cfg;
  Eigen::ArrayXXd a = features::mel_spectrogram(x, cfg).values;
  Eigen::ArrayXXd b = features::mel_spectrogram(y, cfg).values;
  const double L = std::max(a.maxCoeff(), b.maxCoeff()) - std::min(a.minCoeff(), b.minCoeff());
  const double c1 = (0.01 * L) * (0.01 * L), c2 = (0.03 * L) * (0.03 * L);
  const int w = 7;
  double acc = 0.0;
  long count = 0;
  for (long r = 0; r + w <= a.rows(); ++r)
    for (long c = 0; c + w <= a.cols(); ++c) {
      Eigen::ArrayXXd pa = a.block(r, c, w, w), pb = b.block(r, c, w, w);
      const double ma = pa.mean(), mb = pb.mean();
      const double va = (pa - ma).square().mean();
      const double vb = (pb - mb).square().mean();
      const double cov = ((pa - ma) * (pb - mb)).mean();
      acc += ((2 * ma * mb + c1) * (2 * cov + c2)) /
             ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  CHECK(got == doctest::Approx(acc / count).epsilon(1e-9));
}
