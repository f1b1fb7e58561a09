#include "avocodo/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace avocodo::checkpoint {

namespace {
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
uint32_t get_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
}  // namespace

void save(const std::string& path, const std::map<std::string, Eigen::ArrayXXd>& entries) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.write("AVCK", 4);
  put_u32(os, kVersion);
  put_u32(os, static_cast<uint32_t>(entries.size()));
  for (const auto& [name, arr] : entries) {
    put_u32(os, static_cast<uint32_t>(name.size()));
    os.write(name.data(), name.size());
    put_u32(os, static_cast<uint32_t>(arr.rows()));
    put_u32(os, static_cast<uint32_t>(arr.cols()));
    for (long r = 0; r < arr.rows(); ++r)
      os.write(reinterpret_cast<const char*>(arr.row(r).eval().data()),
               arr.cols() * sizeof(double));
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::map<std::string, Eigen::ArrayXXd> load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "AVCK") throw std::runtime_error("not an AVCK file");
  if (get_u32(is) != kVersion) throw std::runtime_error("unsupported AVCK version");
  const uint32_t count = get_u32(is);
  std::map<std::string, Eigen::ArrayXXd> entries;
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t name_len = get_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    const long rows = get_u32(is);
    const long cols = get_u32(is);
    Eigen::ArrayXXd arr(rows, cols);
    std::vector<double> row(cols);
    for (long r = 0; r < rows; ++r) {
      is.read(reinterpret_cast<char*>(row.data()), cols * sizeof(double));
      for (long c = 0; c < cols; ++c) arr(r, c) = row[c];
    }
    if (!is) throw std::runtime_error("truncated AVCK file");
    entries.emplace(std::move(name), std::move(arr));
  }
  return entries;
}

std::map<std::string, Eigen::ArrayXXd> snapshot(const nn::ParamStore& store,
                                                const std::string& prefix) {
  std::map<std::string, Eigen::ArrayXXd> out;
  for (const auto& [name, p] : store.all()) out[prefix + name] = p->value;
  return out;
}

void restore(nn::ParamStore& store, const std::map<std::string, Eigen::ArrayXXd>& entries,
             const std::string& prefix) {
  for (const auto& [name, p] : store.all()) {
    auto it = entries.find(prefix + name);
    if (it == entries.end()) throw std::runtime_error("checkpoint missing entry: " + prefix + name);
    if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols())
      throw std::runtime_error("checkpoint shape mismatch: " + prefix + name);
    p->value = it->second;
  }
}

}  // namespace avocodo::checkpoint
