#include "avocodo/wav.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace avocodo::wav {

namespace {

template <typename T>
T read_le(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw std::runtime_error("wav: truncated file");
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

}  // namespace

Audio read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("wav: cannot open " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0) throw std::runtime_error("wav: not RIFF: " + path);
  read_le<uint32_t>(in);
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0) throw std::runtime_error("wav: not WAVE: " + path);

  uint16_t channels = 0, bits = 0, format = 0;
  uint32_t rate = 0;
  std::vector<int16_t> pcm;
  bool have_fmt = false, have_data = false;
  while (in.read(tag, 4)) {
    const uint32_t size = read_le<uint32_t>(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_le<uint16_t>(in);
      channels = read_le<uint16_t>(in);
      rate = read_le<uint32_t>(in);
      read_le<uint32_t>(in);
      read_le<uint16_t>(in);
      bits = read_le<uint16_t>(in);
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      pcm.resize(size / 2);
      in.read(reinterpret_cast<char*>(pcm.data()), size);
      if (!in) throw std::runtime_error("wav: truncated data chunk");
      have_data = true;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
  if (!have_fmt || !have_data) throw std::runtime_error("wav: missing chunk in " + path);
  if (format != 1 || bits != 16) throw std::runtime_error("wav: only 16-bit PCM supported: " + path);
  if (channels != 1) throw std::runtime_error("wav: only mono supported: " + path);

  Audio a;
  a.sample_rate = static_cast<int>(rate);
  a.samples.resize(static_cast<long>(pcm.size()));
  for (size_t i = 0; i < pcm.size(); ++i) a.samples[static_cast<long>(i)] = pcm[i] / 32768.0;
  return a;
}

void write(const std::string& path, const Audio& audio) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("wav: cannot write " + path);
  const uint32_t n = static_cast<uint32_t>(audio.samples.size());
  const uint32_t data_size = n * 2;

  out.write("RIFF", 4);
  write_le<uint32_t>(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_le<uint32_t>(out, 16);
  write_le<uint16_t>(out, 1);  // PCM
  write_le<uint16_t>(out, 1);  // mono
  write_le<uint32_t>(out, static_cast<uint32_t>(audio.sample_rate));
  write_le<uint32_t>(out, static_cast<uint32_t>(audio.sample_rate) * 2);
  write_le<uint16_t>(out, 2);
  write_le<uint16_t>(out, 16);
  out.write("data", 4);
  write_le<uint32_t>(out, data_size);
  for (uint32_t i = 0; i < n; ++i) {
    const double s = std::clamp(audio.samples[static_cast<long>(i)], -1.0, 1.0);
    write_le<int16_t>(out, static_cast<int16_t>(std::lround(s * 32767.0)));
  }
}

}  // namespace avocodo::wav
