#pragma once

#include "avocodo/pqmf.hpp"
#include "avocodo/stft.hpp"

#include <string>

namespace avocodo::formats {

// AVSB: magic "AVSB", version u16, n_bands u16, length_per_band u32,
// sample_rate u32 (per-band rate, rounded), then f32 LE data band-major.
void write_subbands(const std::string& path, const pqmf::SubbandSignals& sb);
pqmf::SubbandSignals read_subbands(const std::string& path);

// AVML: magic "AVML", n_mels u16, frames u32, then f32 LE data band-major.
void write_mel(const std::string& path, const features::MelSpectrogram& mel);
features::MelSpectrogram read_mel(const std::string& path, int sample_rate = 22050);

}  // namespace avocodo::formats
