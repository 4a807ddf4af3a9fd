#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqcnn/embedding.hpp"

namespace eqcnn {

struct Provenance {
  std::string source;  // "ising", "mnist", ...
  std::uint64_t seed = 0;
  std::vector<std::string> transform_log;
  /// Free-form key/value notes (temperature grids, file paths, ...).
  std::vector<std::pair<std::string, std::string>> notes;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct DatasetSplit {
  std::vector<ImageSample> train;
  std::vector<ImageSample> test;
  Provenance provenance;

  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

class DatasetFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// EQDS container, little-endian:
///   "EQDS" | version u16 | N u16 | L u16 | count u32
///   then per sample: N*N float32 pixels (row-major) | u8 label index
inline constexpr std::uint16_t kEqdsVersion = 1;

std::vector<std::uint8_t> encode_eqds(std::span<const ImageSample> samples);
std::vector<ImageSample> decode_eqds(std::span<const std::uint8_t> bytes);

void write_eqds(const std::filesystem::path& path, std::span<const ImageSample> samples);
std::vector<ImageSample> read_eqds(const std::filesystem::path& path);

std::string provenance_json(const Provenance& provenance);
Provenance parse_provenance_json(const std::string& text);

/// "d.eqds" -> "d.test.eqds".
std::filesystem::path split_test_path(const std::filesystem::path& train_path);
/// "d.eqds" -> "d.json".
std::filesystem::path split_sidecar_path(const std::filesystem::path& train_path);

/// Writes the training samples to `train_path`, the test samples next to it
/// (split_test_path) and the provenance sidecar (split_sidecar_path).
void save_split(const std::filesystem::path& train_path, const DatasetSplit& split);
DatasetSplit load_split(const std::filesystem::path& train_path);

}  // namespace eqcnn
