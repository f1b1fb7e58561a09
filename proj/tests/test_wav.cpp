#include "avocodo/wav.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace avocodo;
namespace fs = std::filesystem;

namespace {
std::string tmp_path(const std::string& name) {
  return (fs::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("wav round trip preserves rate, length, and 16-bit samples") {
  wav::Audio a;
  a.samples = testutil::white_noise(2048, 42, 0.9);
  a.sample_rate = 22050;
  const std::string path = tmp_path("avocodo_rt.wav");
  wav::write(path, a);
  wav::Audio b = wav::read(path);
  REQUIRE(b.samples.size() == a.samples.size());
  CHECK(b.sample_rate == 22050);
  // int16 quantization plus the 32767/32768 write/read scale asymmetry
  CHECK((a.samples - b.samples).abs().maxCoeff() < 2.0 / 32767.0);
  std::remove(path.c_str());
}

TEST_CASE("wav write clamps out-of-range samples") {
  wav::Audio a;
  a.samples = Eigen::ArrayXd(3);
  a.samples << 2.0, -3.0, 0.5;
  const std::string path = tmp_path("avocodo_clamp.wav");
  wav::write(path, a);
  wav::Audio b = wav::read(path);
  CHECK(b.samples(0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(b.samples(1) == doctest::Approx(-1.0).epsilon(1e-3));
  std::remove(path.c_str());
}

TEST_CASE("wav read rejects missing and malformed files") {
  CHECK_THROWS(wav::read(tmp_path("avocodo_definitely_missing.wav")));
  const std::string path = tmp_path("avocodo_garbage.wav");
  std::ofstream(path) << "this is not a wav file at all";
  CHECK_THROWS(wav::read(path));
  std::remove(path.c_str());
}
