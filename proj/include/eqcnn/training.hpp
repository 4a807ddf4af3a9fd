#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eqcnn/circuit.hpp"
#include "eqcnn/dataset.hpp"
#include "eqcnn/head.hpp"
#include "eqcnn/loss.hpp"
#include "eqcnn/model.hpp"

namespace eqcnn {

struct TrainConfig {
  double learning_rate = 0.01;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon_adam = 1e-8;
  double init_low = -0.1;
  double init_high = 0.1;
  std::size_t epochs = 50;
  std::size_t n_samples = 40;
  std::size_t batch_size = 4;
  std::uint64_t seed = 0;
  /// Threads for per-sample gradients inside a batch; 0 = available parallelism.
  std::size_t workers = 1;

  void validate() const;
};

/// Architecture plus readout; the trainable vector is the circuit parameters
/// followed by phi when the head is M2.
struct ModelConfig {
  Architecture arch = Architecture::equiv;
  HeadMode head = HeadMode::M1;
  std::size_t n = 4;
  std::size_t num_classes = 2;

  std::string label() const;  // e.g. "appr_equiv/M2"
};

class Model {
 public:
  explicit Model(const ModelConfig& config);

  const ModelConfig& config() const noexcept { return config_; }
  const CircuitSpec& circuit() const noexcept { return circuit_; }
  std::size_t num_trainable() const noexcept;

  MeasurementHead head_for(std::span<const double> trainable) const;
  std::vector<double> predict(std::span<const double> trainable, const Image& image) const;
  /// Loss and gradient over the trainable vector for one sample.
  double loss_gradient(std::span<const double> trainable, const ImageSample& sample,
                       std::span<double> grad_out) const;

 private:
  ModelConfig config_;
  CircuitSpec circuit_;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;

  explicit AdamState(std::size_t size = 0) : m(size, 0.0), v(size, 0.0) {}
};

/// One bias-corrected ADAM update in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const TrainConfig& config);

struct RunHistory {
  std::vector<double> train_loss;
  std::vector<double> train_accuracy;
  std::vector<double> test_accuracy;
  std::vector<double> initial_params;
  std::vector<double> final_params;
  double wall_seconds = 0.0;
};

double accuracy(const Model& model, std::span<const double> trainable,
                std::span<const ImageSample> samples, std::size_t workers = 1);

/// Trains on the first config.n_samples training samples and records
/// per-epoch metrics. Deterministic for a fixed seed.
RunHistory train(const ModelConfig& model, const DatasetSplit& data, const TrainConfig& config);

/// Training set sizes N_s = 2^i * 10 with batch size 2^i.
struct SweepPoint {
  std::size_t i = 1;
  std::size_t n_samples() const { return (std::size_t{1} << i) * 10; }
  std::size_t batch_size() const { return std::size_t{1} << i; }
};

struct SweepRow {
  std::string model;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
};

struct SweepAggregate {
  std::string model;
  std::size_t n_samples = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double best = 0.0;
  std::size_t runs = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> aggregates;
};

struct SweepOptions {
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::size_t workers = 1;
};

/// Trains every (model, N_s, seed) cell; the test set is data.test for all
/// cells and the training set of a cell is the first N_s of data.train.
SweepTable sweep(std::span<const ModelConfig> models, const DatasetSplit& data,
                 std::span<const std::size_t> i_range, const TrainConfig& base,
                 const SweepOptions& options = {});

std::string sweep_rows_csv(const SweepTable& table);
std::string sweep_aggregate_csv(const SweepTable& table);
std::string history_csv(const RunHistory& history);

}  // namespace eqcnn
