#pragma once

#include "avocodo/nn.hpp"

#include <map>
#include <string>

namespace avocodo::checkpoint {

/// Versioned container mapping path strings to arrays ("AVCK"). Arrays are
/// stored as f64 so save/load round-trips bit-exactly (training must be
/// resumable without drift).
void save(const std::string& path, const std::map<std::string, Eigen::ArrayXXd>& entries);
std::map<std::string, Eigen::ArrayXXd> load(const std::string& path);

/// Snapshot/restore of a parameter store under a key prefix.
std::map<std::string, Eigen::ArrayXXd> snapshot(const nn::ParamStore& store,
                                                const std::string& prefix = "");
/// Copies matching entries into existing parameters; throws if a parameter
/// is missing from `entries` or shapes disagree.
void restore(nn::ParamStore& store, const std::map<std::string, Eigen::ArrayXXd>& entries,
             const std::string& prefix = "");

}  // namespace avocodo::checkpoint
