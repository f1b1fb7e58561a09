#pragma once

#include "avocodo/trainer.hpp"

#include <string>

namespace avocodo::config {

/// Reads a flat TOML-subset config ([section] headers, key = value lines,
/// '#' comments; values: numbers, booleans, quoted strings). Unknown keys
/// are an error so typos do not silently fall back to defaults. All fields
/// default to the published hyperparameters.
///
/// Sections/keys:
///   [train]     lr0, beta1, beta2, lr_decay, weight_decay, segment,
///               batch_size, steps_per_epoch, seed, sample_rate,
///               preset = "speech" | "singing"
///   [generator] variant = "v1" | "v2" | "tiny"
///   [discriminator] variant = "full" | "tiny"
///   [losses]    lambda_fm, lambda_spec
///   [stft]      fft, win, hop
train::TrainConfig parse_train_config(const std::string& path);

/// In-memory variant (used by tests).
train::TrainConfig parse_train_config_text(const std::string& text);

}  // namespace avocodo::config
