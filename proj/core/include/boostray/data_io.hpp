#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "boostray/dataset.hpp"

namespace boostray {

/// Reads `label,f0,...,f{d-1}` CSV. Class indices follow the order in which
/// class names first appear.
Dataset load_csv(const std::filesystem::path& path);

/// Writes the CSV layout read by load_csv, with shortest round-trip floats.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

// FMX1 binary layout (little-endian):
//   "FMX1" | u32 version | u64 n_rows | u64 n_cols | u32 n_classes
//   | n_rows x u32 label | n_rows*n_cols x f32 feature (row-major)
// Class names live in the sibling `<stem>.classes` file, one per line.
inline constexpr std::uint32_t kFmxVersion = 1;
inline constexpr std::size_t kFmxHeaderBytes = 4 + 4 + 8 + 8 + 4;

Dataset load_fmx(const std::filesystem::path& path);
void write_fmx(const Dataset& dataset, const std::filesystem::path& path);

/// Serialized FMX1 payload (without the class-name file).
std::vector<std::uint8_t> encode_fmx(const Dataset& dataset);

std::filesystem::path classes_path_for(const std::filesystem::path& fmx_path);

/// Dispatches on extension: `.csv` goes to load_csv, anything else to load_fmx.
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace boostray
