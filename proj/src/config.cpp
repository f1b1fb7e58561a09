#include "avocodo/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace avocodo::config {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

double to_number(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing chars");
    return x;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad numeric value for " + key + ": " + v);
  }
}

}  // namespace

train::TrainConfig parse_train_config_text(const std::string& text) {
  train::TrainConfig cfg;
  bool singing = false;
  std::string disc_variant = "full", gen_variant = "v2";

  std::istringstream is(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string val = unquote(trim(line.substr(eq + 1)));

    if (key == "train.lr0") cfg.lr0 = to_number(key, val);
    else if (key == "train.beta1") cfg.adam_beta1 = to_number(key, val);
    else if (key == "train.beta2") cfg.adam_beta2 = to_number(key, val);
    else if (key == "train.lr_decay") cfg.lr_decay = to_number(key, val);
    else if (key == "train.weight_decay") cfg.weight_decay = to_number(key, val);
    else if (key == "train.segment") cfg.segment = static_cast<long>(to_number(key, val));
    else if (key == "train.batch_size") cfg.batch_size = static_cast<int>(to_number(key, val));
    else if (key == "train.steps_per_epoch") cfg.steps_per_epoch = static_cast<long>(to_number(key, val));
    else if (key == "train.seed") cfg.seed = static_cast<uint64_t>(to_number(key, val));
    else if (key == "train.sample_rate") cfg.sample_rate = static_cast<int>(to_number(key, val));
    else if (key == "train.preset") singing = val == "singing";
    else if (key == "generator.variant") gen_variant = val;
    else if (key == "discriminator.variant") disc_variant = val;
    else if (key == "losses.lambda_fm") cfg.weights.lambda_fm = to_number(key, val);
    else if (key == "losses.lambda_spec") cfg.weights.lambda_spec = to_number(key, val);
    else if (key == "stft.fft") cfg.stft.fft_size = static_cast<int>(to_number(key, val));
    else if (key == "stft.win") cfg.stft.win_size = static_cast<int>(to_number(key, val));
    else if (key == "stft.hop") cfg.stft.hop_size = static_cast<int>(to_number(key, val));
    else throw std::runtime_error("config: unknown key " + key);
  }

  if (singing) cfg.segment = 65536;
  if (gen_variant == "v1") cfg.generator = gen::GeneratorConfig::v1();
  else if (gen_variant == "v2") cfg.generator = gen::GeneratorConfig::v2();
  else if (gen_variant == "tiny") cfg.generator = gen::GeneratorConfig::tiny();
  else throw std::runtime_error("config: unknown generator.variant " + gen_variant);
  if (disc_variant == "full") {
    cfg.combd = disc::CoMBDConfig::full();
    cfg.sbd = disc::SBDConfig::full(cfg.segment);
  } else if (disc_variant == "tiny") {
    cfg.combd = disc::CoMBDConfig::tiny();
    cfg.sbd = disc::SBDConfig::tiny(cfg.segment);
  } else {
    throw std::runtime_error("config: unknown discriminator.variant " + disc_variant);
  }
  cfg.validate();
  return cfg;
}

train::TrainConfig parse_train_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot read " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_train_config_text(buf.str());
}

}  // namespace avocodo::config
