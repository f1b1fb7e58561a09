// Resampling-artifact demonstrations.
//
//   artifact downsample  --method {esds,avgpool,pqmf} --factor K --in x.wav --out y.wav
//   artifact alias-report --tone HZ --factor K [--rate FS] [--json]
//   artifact spectrogram --in x.wav --out s.pnm

#include "avocodo/resample.hpp"
#include "avocodo/stft.hpp"
#include "avocodo/wav.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using namespace avocodo;

namespace {

// 8-bit PGM of the spectrogram, dB-scaled over a 100 dB range, low
// frequencies at the bottom row.
void write_pnm(const std::string& path, const Eigen::ArrayXXd& mag) {
  Eigen::ArrayXXd db = (mag.max(1e-10)).log10() * 20.0;
  const double top = db.maxCoeff();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "P5\n" << db.cols() << " " << db.rows() << "\n255\n";
  for (long r = db.rows() - 1; r >= 0; --r)
    for (long c = 0; c < db.cols(); ++c) {
      const double v = std::clamp((db(r, c) - top + 100.0) / 100.0, 0.0, 1.0);
      os.put(static_cast<char>(v * 255.0 + 0.5));
    }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aliasing/imaging artifact lab"};
  app.require_subcommand(1);

  std::string method = "esds", in_path, out_path;
  int factor = 2;
  double tone = 2000.0, rate = 22050.0;
  bool as_json = false;

  auto* down = app.add_subcommand("downsample", "decimate a waveform");
  down->add_option("--method", method, "esds | avgpool | pqmf");
  down->add_option("--factor", factor, "decimation factor")->required();
  down->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
  down->add_option("--out", out_path)->required();

  auto* rep = app.add_subcommand("alias-report", "tone fold-down comparison");
  rep->add_option("--tone", tone, "tone frequency, Hz")->required();
  rep->add_option("--factor", factor, "decimation factor")->required();
  rep->add_option("--rate", rate, "sample rate, Hz");
  rep->add_flag("--json", as_json, "emit JSON");

  auto* spec = app.add_subcommand("spectrogram", "write a PGM spectrogram");
  spec->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
  spec->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (down->parsed()) {
      const wav::Audio audio = wav::read(in_path);
      wav::Audio out;
      out.samples = resample::downsample(audio.samples, resample::method_from_string(method), factor);
      out.sample_rate = audio.sample_rate / factor;
      wav::write(out_path, out);
      std::cout << "wrote " << out.samples.size() << " samples at " << out.sample_rate
                << " Hz to " << out_path << "\n";
    } else if (rep->parsed()) {
      const auto reports = resample::alias_report(tone, rate, factor);
      if (as_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : reports)
          j.push_back({{"method", resample::to_string(r.method)},
                       {"factor", r.factor},
                       {"alias_energy_db", r.alias_energy_db},
                       {"passband_distortion_db", r.passband_distortion_db}});
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "tone " << tone << " Hz, rate " << rate << " Hz, factor " << factor << "\n";
        for (const auto& r : reports)
          std::cout << "  " << resample::to_string(r.method)
                    << ": alias " << r.alias_energy_db << " dB, residual "
                    << r.passband_distortion_db << " dB\n";
      }
    } else {
      const wav::Audio audio = wav::read(in_path);
      write_pnm(out_path, features::stft_magnitude(audio.samples, features::StftConfig{}));
      std::cout << "wrote " << out_path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
