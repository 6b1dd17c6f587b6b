#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "boostray/booster.hpp"

namespace boostray {

inline constexpr int kModelFormatVersion = 1;

/// Canonical JSON text of a model: fixed key order, shortest round-trip reals.
std::string model_to_json(const BoostModel& model);
BoostModel model_from_json(std::string_view text);

void save_model(const BoostModel& model, const std::filesystem::path& path);
BoostModel load_model(const std::filesystem::path& path);

}  // namespace boostray
