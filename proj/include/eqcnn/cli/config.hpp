#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eqcnn/ising.hpp"
#include "eqcnn/training.hpp"

namespace eqcnn::cli {

/// Usage or configuration error; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A raw value plus where it came from ("run.cfg:3" or "--lr"), for messages.
struct RawValue {
  std::string value;
  std::string origin;
};

using RawConfig = std::map<std::string, RawValue, std::less<>>;

/// Keys accepted in config files; command-line flags use the same names.
const std::vector<std::string_view>& config_keys();

/// Parses flat `key = value` text. Blank lines and lines starting with '#'
/// are skipped. Unknown keys and malformed lines raise ConfigError naming
/// `source:line`.
RawConfig parse_config_text(std::string_view text, std::string_view source);
RawConfig read_config_file(const std::filesystem::path& path);

/// Later entries win.
void merge_into(RawConfig& base, const RawConfig& overrides);

enum class DatasetKind { ising, mnist };

/// train.workers defaults to 0 here (available parallelism); results do not
/// depend on the worker count.
struct ExperimentConfig {
  ModelConfig model;
  DatasetKind dataset = DatasetKind::ising;
  TrainConfig train;

  // Data.
  std::string data;       // existing EQDS training file; empty = generate
  std::string mnist_dir;  // directory holding the four IDX files
  std::uint64_t data_seed = 0;
  std::size_t n_per_class = 0;  // 0 = just enough for the requested N_s
  std::size_t n_test_per_class = 100;
  std::size_t sweeps = 2000;
  double coupling = 1.0;
  IsingGrid grid;

  // Sweep.
  std::size_t i_min = 1;
  std::size_t i_max = 10;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::vector<ModelConfig> models;

  std::string out = ".";
  bool allow_nonequiv_m2 = false;

  IsingConfig ising_base() const;
};

/// Typed view of a RawConfig; defaults fill unset keys. Invalid values raise
/// ConfigError naming the value's origin.
ExperimentConfig resolve_config(const RawConfig& raw);

/// Every key with its resolved value, in config_keys() order; feeding the
/// text back through parse_config_text/resolve_config gives the same config.
std::string echo_config(const ExperimentConfig& config);

/// Throws ConfigError for nonequiv + M2 unless allowed; returns a warning
/// message when the combination is allowed, empty otherwise.
std::string check_head_combination(const ModelConfig& model, bool allow_nonequiv_m2);

ModelConfig parse_model_label(std::string_view label);

}  // namespace eqcnn::cli
