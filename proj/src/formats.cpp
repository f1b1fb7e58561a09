#include "avocodo/formats.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace avocodo::formats {

namespace {

void put_u16(std::ostream& os, uint16_t v) { os.write(reinterpret_cast<const char*>(&v), 2); }
void put_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }

uint16_t get_u16(std::istream& is) {
  uint16_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 2);
  return v;
}
uint32_t get_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

void write_f32_rows(std::ostream& os, const Eigen::ArrayXXd& data) {
  std::vector<float> row(data.cols());
  for (long r = 0; r < data.rows(); ++r) {
    for (long c = 0; c < data.cols(); ++c) row[c] = static_cast<float>(data(r, c));
    os.write(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(float));
  }
}

Eigen::ArrayXXd read_f32_rows(std::istream& is, long rows, long cols) {
  Eigen::ArrayXXd data(rows, cols);
  std::vector<float> row(cols);
  for (long r = 0; r < rows; ++r) {
    is.read(reinterpret_cast<char*>(row.data()), row.size() * sizeof(float));
    for (long c = 0; c < cols; ++c) data(r, c) = row[c];
  }
  if (!is) throw std::runtime_error("truncated data section");
  return data;
}

void expect_magic(std::istream& is, const char* magic) {
  char buf[4];
  is.read(buf, 4);
  if (!is || std::string(buf, 4) != magic)
    throw std::runtime_error(std::string("bad magic, expected ") + magic);
}

}  // namespace

void write_subbands(const std::string& path, const pqmf::SubbandSignals& sb) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.write("AVSB", 4);
  put_u16(os, 1);  // version
  put_u16(os, static_cast<uint16_t>(sb.n_bands));
  put_u32(os, static_cast<uint32_t>(sb.length_per_band));
  put_u32(os, static_cast<uint32_t>(sb.sample_rate_per_band + 0.5));
  write_f32_rows(os, sb.data);
  if (!os) throw std::runtime_error("write failed: " + path);
}

pqmf::SubbandSignals read_subbands(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  expect_magic(is, "AVSB");
  const uint16_t version = get_u16(is);
  if (version != 1) throw std::runtime_error("unsupported AVSB version");
  pqmf::SubbandSignals sb;
  sb.n_bands = get_u16(is);
  sb.length_per_band = get_u32(is);
  sb.sample_rate_per_band = get_u32(is);
  if (sb.n_bands <= 0) throw std::runtime_error("bad AVSB header");
  sb.data = read_f32_rows(is, sb.n_bands, sb.length_per_band);
  return sb;
}

void write_mel(const std::string& path, const features::MelSpectrogram& mel) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.write("AVML", 4);
  put_u16(os, static_cast<uint16_t>(mel.n_mels));
  put_u32(os, static_cast<uint32_t>(mel.values.cols()));
  write_f32_rows(os, mel.values);
  if (!os) throw std::runtime_error("write failed: " + path);
}

features::MelSpectrogram read_mel(const std::string& path, int sample_rate) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  expect_magic(is, "AVML");
  features::MelSpectrogram mel;
  mel.n_mels = get_u16(is);
  const long frames = get_u32(is);
  mel.sample_rate = sample_rate;
  if (mel.n_mels <= 0) throw std::runtime_error("bad AVML header");
  mel.values = read_f32_rows(is, mel.n_mels, frames);
  return mel;
}

}  // namespace avocodo::formats
