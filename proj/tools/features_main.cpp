// Mel-spectrogram extraction: features mel --in x.wav --out x.mel

#include "avocodo/formats.hpp"
#include "avocodo/stft.hpp"
#include "avocodo/wav.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace avocodo;

int main(int argc, char** argv) {
  CLI::App app{"acoustic feature extraction"};
  app.require_subcommand(1);

  std::string in_path, out_path;
  auto* mel = app.add_subcommand("mel", "80-band log-mel spectrogram (AVML)");
  mel->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
  mel->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const wav::Audio audio = wav::read(in_path);
    const auto m = features::mel_spectrogram(audio.samples, features::StftConfig{},
                                             audio.sample_rate);
    formats::write_mel(out_path, m);
    std::cout << "wrote " << m.n_mels << " x " << m.frames() << " mel to " << out_path << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
