// Sub-band analysis/synthesis front end.
//
//   pqmf analyze --bands N --in x.wav --out-dir d/
//   pqmf synth   --bands N --in-dir d/ --out y.wav

#include "avocodo/formats.hpp"
#include "avocodo/pqmf.hpp"
#include "avocodo/wav.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace avocodo;

int main(int argc, char** argv) {
  CLI::App app{"PQMF sub-band analysis/synthesis"};
  app.require_subcommand(1);

  int bands = 16;
  std::string in_path, out_path, dir;

  auto* analyze = app.add_subcommand("analyze", "split a waveform into sub-bands");
  analyze->add_option("--bands", bands, "number of bands")->required();
  analyze->add_option("--in", in_path, "input wav")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out-dir", dir, "output directory")->required();

  auto* synth = app.add_subcommand("synth", "reassemble sub-bands into a waveform");
  synth->add_option("--bands", bands, "number of bands")->required();
  synth->add_option("--in-dir", dir, "directory holding subbands.avsb")->required();
  synth->add_option("--out", out_path, "output wav")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      const wav::Audio audio = wav::read(in_path);
      const auto& bank = pqmf::cached_bank(bands);
      const auto sb = pqmf::analyze(bank, audio.samples, audio.sample_rate);
      fs::create_directories(dir);
      formats::write_subbands((fs::path(dir) / "subbands.avsb").string(), sb);
      std::cout << "wrote " << sb.n_bands << " bands x " << sb.length_per_band
                << " samples to " << dir << "/subbands.avsb\n";
    } else {
      const auto sb = formats::read_subbands((fs::path(dir) / "subbands.avsb").string());
      if (sb.n_bands != bands)
        throw std::runtime_error("file has " + std::to_string(sb.n_bands) + " bands");
      const auto& bank = pqmf::cached_bank(bands);
      wav::Audio out;
      out.samples = pqmf::synthesize(bank, sb);
      out.sample_rate = static_cast<int>(sb.sample_rate_per_band * bands + 0.5);
      wav::write(out_path, out);
      std::cout << "wrote " << out.samples.size() << " samples to " << out_path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
