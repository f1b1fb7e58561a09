#include "avocodo/checkpoint.hpp"
#include "avocodo/formats.hpp"

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

TEST_CASE("sub-band container round-trips at f32 precision") {
  pqmf::SubbandSignals sb;
  sb.n_bands = 4;
  sb.length_per_band = 100;
  sb.data = testutil::random_array(4, 100, 1, 0.3);
  sb.sample_rate_per_band = 22050.0 / 4;
  const std::string path = tmp_path("avocodo_sb.avsb");
  formats::write_subbands(path, sb);
  pqmf::SubbandSignals rt = formats::read_subbands(path);
  CHECK(rt.n_bands == 4);
  CHECK(rt.length_per_band == 100);
  CHECK(rt.sample_rate_per_band == doctest::Approx(22050.0 / 4).epsilon(1e-4));
  CHECK((rt.data - sb.data).abs().maxCoeff() < 1e-6);
  std::remove(path.c_str());
}

TEST_CASE("mel container round-trips at f32 precision") {
  features::MelSpectrogram mel;
  mel.n_mels = 80;
  mel.values = testutil::random_array(80, 17, 2);
  const std::string path = tmp_path("avocodo_mel.avml");
  formats::write_mel(path, mel);
  features::MelSpectrogram rt = formats::read_mel(path);
  CHECK(rt.n_mels == 80);
  CHECK(rt.frames() == 17);
  CHECK((rt.values - mel.values).abs().maxCoeff() < 1e-5);
  std::remove(path.c_str());
}

TEST_CASE("format readers reject wrong magic") {
  const std::string path = tmp_path("avocodo_bad.bin");
  std::ofstream(path, std::ios::binary) << "NOPEnope and some trailing bytes here";
  CHECK_THROWS(formats::read_subbands(path));
  CHECK_THROWS(formats::read_mel(path));
  std::remove(path.c_str());
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  std::map<std::string, Eigen::ArrayXXd> entries;
  entries["a/weights"] = testutil::random_array(7, 3, 5);
  entries["b.scalar"] = Eigen::ArrayXXd::Constant(1, 1, 1.0 / 3.0);
  entries["c"] = testutil::random_array(1, 9, 6) * 1e-17;  // denormal-ish values survive
  const std::string path = tmp_path("avocodo_ck.avck");
  checkpoint::save(path, entries);
  auto rt = checkpoint::load(path);
  REQUIRE(rt.size() == entries.size());
  for (const auto& [k, v] : entries) {
    REQUIRE(rt.count(k) == 1);
    CHECK(rt[k].rows() == v.rows());
    CHECK((rt[k] == v).all());  // f64 storage: exact
  }
  std::remove(path.c_str());
}

TEST_CASE("snapshot and restore move a parameter store through a map") {
  nn::ParamStore a(9), b(10);
  a.create("x", 2, 3);
  a.create_const("y", 1, 1, 0.5);
  b.create("x", 2, 3);
  b.create_const("y", 1, 1, 0.0);
  auto snap = checkpoint::snapshot(a, "pre/");
  checkpoint::restore(b, snap, "pre/");
  CHECK((b.at("x")->value == a.at("x")->value).all());
  CHECK(b.at("y")->value(0, 0) == 0.5);

  nn::ParamStore c(11);
  c.create("x", 3, 3);  // wrong shape
  CHECK_THROWS(checkpoint::restore(c, snap, "pre/"));
  nn::ParamStore d(12);
  d.create("z", 1, 1);  // missing from the snapshot
  CHECK_THROWS(checkpoint::restore(d, snap, "pre/"));
}
