// Waveform synthesis from a checkpointed generator:
//   infer --ckpt final.avck --mel x.mel --out y.wav
//   infer --ckpt final.avck --wav x.wav --out y.wav   (extracts the mel first)

#include "avocodo/formats.hpp"
#include "avocodo/stft.hpp"
#include "avocodo/trainer.hpp"
#include "avocodo/wav.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace avocodo;

int main(int argc, char** argv) {
  CLI::App app{"vocoder inference"};

  std::string ckpt, mel_path, wav_path, out_path;
  app.add_option("--ckpt", ckpt, "AVCK checkpoint")->required()->check(CLI::ExistingFile);
  auto* mel_opt = app.add_option("--mel", mel_path, "AVML mel input")->check(CLI::ExistingFile);
  auto* wav_opt = app.add_option("--wav", wav_path, "wav input (mel extracted)")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "output wav")->required();
  mel_opt->excludes(wav_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (mel_path.empty() && wav_path.empty())
      throw std::runtime_error("need --mel or --wav");
    auto g = train::load_generator(ckpt);
    features::MelSpectrogram mel;
    int sample_rate = 22050;
    if (!mel_path.empty()) {
      mel = formats::read_mel(mel_path);
    } else {
      const wav::Audio audio = wav::read(wav_path);
      sample_rate = audio.sample_rate;
      mel = features::mel_spectrogram(audio.samples, features::StftConfig{}, sample_rate);
    }
    wav::Audio out;
    out.samples = train::infer(*g, mel);
    out.sample_rate = sample_rate;
    wav::write(out_path, out);
    std::cout << "wrote " << out.samples.size() << " samples to " << out_path << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
