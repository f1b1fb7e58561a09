#include "avocodo/resample.hpp"

#include "avocodo/dsp.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace avocodo;

TEST_CASE("method names round-trip") {
  CHECK(resample::method_from_string("esds") == resample::Method::equally_spaced);
  CHECK(resample::method_from_string("avgpool") == resample::Method::average_pool);
  CHECK(resample::method_from_string("pqmf") == resample::Method::pqmf);
  CHECK(resample::to_string(resample::Method::average_pool) == "avgpool");
  CHECK_THROWS(resample::method_from_string("nearest"));
}

TEST_CASE("equally spaced decimation keeps every k-th sample") {
  Eigen::ArrayXd x = testutil::white_noise(32, 1);
  Eigen::ArrayXd y = resample::downsample(x, resample::Method::equally_spaced, 4);
  REQUIRE(y.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(y(i) == x(4 * i));
}

TEST_CASE("average pool takes block means") {
  Eigen::ArrayXd x(8);
  x << 1, 3, 5, 7, 2, 4, 6, 8;
  Eigen::ArrayXd y = resample::downsample(x, resample::Method::average_pool, 4);
  REQUIRE(y.size() == 2);
  CHECK(y(0) == doctest::Approx(4.0));
  CHECK(y(1) == doctest::Approx(5.0));
}

TEST_CASE("all methods preserve a constant") {
  Eigen::ArrayXd x = Eigen::ArrayXd::Constant(4096, 0.25);
  for (auto m : {resample::Method::equally_spaced, resample::Method::average_pool}) {
    Eigen::ArrayXd y = resample::downsample(x, m, 4);
    CHECK((y - 0.25).abs().maxCoeff() < 1e-12);
  }
  // PQMF settles to the constant after its group delay
  Eigen::ArrayXd y = resample::downsample(x, resample::Method::pqmf, 4);
  CHECK((y.segment(256, 512) - 0.25).abs().maxCoeff() < 0.01);
}

TEST_CASE("zero stuffing places samples on the coarse grid") {
  Eigen::ArrayXd x(3);
  x << 1, -2, 3;
  Eigen::ArrayXd y = resample::zero_stuff_upsample(x, 2);
  REQUIRE(y.size() == 6);
  Eigen::ArrayXd ref(6);
  ref << 1, 0, -2, 0, 3, 0;
  CHECK((y - ref).abs().maxCoeff() == 0.0);
}

TEST_CASE("equally spaced decimation of a zero-stuffed signal is the identity") {
  Eigen::ArrayXd x = testutil::white_noise(100, 2);
  Eigen::ArrayXd rt = resample::downsample(resample::zero_stuff_upsample(x, 3),
                                           resample::Method::equally_spaced, 3);
  CHECK((rt - x).abs().maxCoeff() == 0.0);
}

TEST_CASE("alias report: folding energy is ordered esds > avgpool > pqmf") {
  // 2 kHz at 22050, factor 8: post-decimation Nyquist is ~1378 Hz, the tone
  // folds to ~756 Hz
  auto reports = resample::alias_report(2000.0, 22050.0, 8);
  double by_method[3] = {0, 0, 0};
  for (const auto& r : reports) by_method[static_cast<int>(r.method)] = r.alias_energy_db;
  const double esds = by_method[static_cast<int>(resample::Method::equally_spaced)];
  const double avg = by_method[static_cast<int>(resample::Method::average_pool)];
  const double pq = by_method[static_cast<int>(resample::Method::pqmf)];
  CHECK(std::abs(esds) < 6.0);  // naive decimation folds at nearly full level
  CHECK(pq < -60.0);            // anti-aliased path buries the fold
  CHECK(avg < esds);            // boxcar attenuates but does not remove it
  CHECK(avg > pq);
}

TEST_CASE("alias report handles a non-power-of-two factor") {
  auto reports = resample::alias_report(1600.0, 22050.0, 11);
  double esds = 0, avg = 0, pq = 0;
  for (const auto& r : reports) {
    if (r.method == resample::Method::equally_spaced) esds = r.alias_energy_db;
    if (r.method == resample::Method::average_pool) avg = r.alias_energy_db;
    if (r.method == resample::Method::pqmf) pq = r.alias_energy_db;
  }
  CHECK(std::abs(esds) < 10.0);
  CHECK(pq < -50.0);
  CHECK(avg < esds);
  CHECK(avg > pq);
}

TEST_CASE("alias report rejects tones that do not fold") {
  CHECK_THROWS(resample::alias_report(500.0, 22050.0, 8));  // below post-Nyquist
}
