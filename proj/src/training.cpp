#include "eqcnn/training.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "eqcnn/gradient.hpp"
#include "eqcnn/parallel.hpp"
#include "eqcnn/rng.hpp"

namespace eqcnn {
namespace {

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::size_t resolve_workers(std::size_t workers) {
  return workers == 0 ? default_workers() : workers;
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

}  // namespace

void TrainConfig::validate() const {
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("ADAM betas must lie in (0, 1)");
  }
  if (learning_rate < 0.0) throw std::invalid_argument("learning rate must be >= 0");
  if (epsilon_adam <= 0.0) throw std::invalid_argument("epsilon_adam must be > 0");
  if (init_low > init_high) throw std::invalid_argument("empty initialisation interval");
  if (n_samples == 0) throw std::invalid_argument("n_samples must be > 0");
  if (batch_size == 0 || batch_size > n_samples) {
    throw std::invalid_argument("batch_size must be in 1..n_samples");
  }
}

std::string ModelConfig::label() const {
  return std::string(to_string(arch)) + (head == HeadMode::M1 ? "/M1" : "/M2");
}

Model::Model(const ModelConfig& config)
    : config_(config), circuit_(build_qcnn(config.arch, config.n, config.num_classes)) {}

std::size_t Model::num_trainable() const noexcept {
  return circuit_.num_params + (config_.head == HeadMode::M2 ? 1 : 0);
}

MeasurementHead Model::head_for(std::span<const double> trainable) const {
  if (trainable.size() != num_trainable()) {
    throw std::invalid_argument("expected " + std::to_string(num_trainable()) +
                                " trainable values, got " + std::to_string(trainable.size()));
  }
  const double phi = config_.head == HeadMode::M2 ? trainable.back() : 0.0;
  return make_head(circuit_, config_.head, phi, config_.num_classes);
}

std::vector<double> Model::predict(std::span<const double> trainable, const Image& image) const {
  const auto head = head_for(trainable);
  return eqcnn::predict(circuit_, trainable.first(circuit_.num_params), head, image);
}

double Model::loss_gradient(std::span<const double> trainable, const ImageSample& sample,
                            std::span<double> grad_out) const {
  const auto head = head_for(trainable);
  const auto result = eqcnn::loss_gradient(circuit_, trainable.first(circuit_.num_params),
                                           caa_embed(sample.image), head, sample.label);
  std::copy(result.tape.params.begin(), result.tape.params.end(), grad_out.begin());
  if (config_.head == HeadMode::M2) grad_out[circuit_.num_params] = result.tape.phi;
  return result.loss;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const TrainConfig& config) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw std::invalid_argument("ADAM vectors have mismatched lengths");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(config.beta1, t);
  const double correct2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    state.m[k] = config.beta1 * state.m[k] + (1.0 - config.beta1) * g;
    state.v[k] = config.beta2 * state.v[k] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[k] / correct1;
    const double v_hat = state.v[k] / correct2;
    params[k] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon_adam);
  }
}

double accuracy(const Model& model, std::span<const double> trainable,
                std::span<const ImageSample> samples, std::size_t workers) {
  if (samples.empty()) return 0.0;
  std::vector<char> correct(samples.size(), 0);
  parallel_for(samples.size(), resolve_workers(workers), [&](std::size_t k) {
    const auto dist = model.predict(trainable, samples[k].image);
    correct[k] = argmax(dist) == samples[k].label_index() ? 1 : 0;
  });
  const auto hits = std::count(correct.begin(), correct.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

RunHistory train(const ModelConfig& model_config, const DatasetSplit& data,
                 const TrainConfig& config) {
  config.validate();
  if (data.train.empty()) throw std::invalid_argument("training set is empty");
  if (data.train.size() < config.n_samples) {
    throw std::invalid_argument("training set has " + std::to_string(data.train.size()) +
                                " samples, need " + std::to_string(config.n_samples));
  }
  const auto start = std::chrono::steady_clock::now();
  const Model model(model_config);
  const std::span<const ImageSample> train_set(data.train.data(), config.n_samples);
  const std::size_t workers = resolve_workers(config.workers);

  Rng rng(config.seed);
  std::vector<double> params(model.num_trainable());
  for (auto& p : params) p = rng.uniform(config.init_low, config.init_high);

  RunHistory history;
  history.initial_params = params;
  AdamState adam(params.size());

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<double>> sample_grads;
  std::vector<double> sample_loss;
  std::vector<double> grad(params.size());

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const std::size_t count = end - begin;
      sample_grads.assign(count, std::vector<double>(params.size(), 0.0));
      sample_loss.assign(count, 0.0);
      parallel_for(count, workers, [&](std::size_t k) {
        sample_loss[k] = model.loss_gradient(params, train_set[order[begin + k]], sample_grads[k]);
      });
      // Fixed-order reduction keeps results independent of the thread count.
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t k = 0; k < count; ++k) {
        batch_loss += sample_loss[k];
        for (std::size_t p = 0; p < grad.size(); ++p) grad[p] += sample_grads[k][p];
      }
      const double scale = 1.0 / static_cast<double>(count);
      for (auto& g : grad) g *= scale;
      adam_step(params, grad, adam, config);
      loss_sum += batch_loss * scale;
      ++batches;
    }
    history.train_loss.push_back(loss_sum / static_cast<double>(batches));
    history.train_accuracy.push_back(accuracy(model, params, train_set, workers));
    history.test_accuracy.push_back(accuracy(model, params, data.test, workers));
  }

  history.final_params = params;
  history.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return history;
}

SweepTable sweep(std::span<const ModelConfig> models, const DatasetSplit& data,
                 std::span<const std::size_t> i_range, const TrainConfig& base,
                 const SweepOptions& options) {
  if (models.empty()) throw std::invalid_argument("sweep needs at least one model");
  if (i_range.empty()) throw std::invalid_argument("sweep needs a non-empty i range");
  if (options.seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
  if (data.test.empty()) throw std::invalid_argument("sweep needs a test set");
  for (std::size_t i : i_range) {
    if (i > 20) throw std::invalid_argument("sweep exponent i too large");
    const SweepPoint point{i};
    if (point.n_samples() > data.train.size()) {
      throw std::invalid_argument("insufficient data: N_s = " + std::to_string(point.n_samples()) +
                                  " but only " + std::to_string(data.train.size()) +
                                  " training samples available");
    }
  }

  struct Cell {
    std::size_t model;
    std::size_t i;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t i : i_range) {
      for (std::uint64_t seed : options.seeds) cells.push_back({m, i, seed});
    }
  }

  std::vector<double> results(cells.size());
  parallel_for(cells.size(), resolve_workers(options.workers), [&](std::size_t c) {
    const SweepPoint point{cells[c].i};
    TrainConfig config = base;
    config.n_samples = point.n_samples();
    config.batch_size = point.batch_size();
    config.seed = cells[c].seed;
    config.workers = 1;
    const RunHistory h = train(models[cells[c].model], data, config);
    results[c] = h.test_accuracy.empty() ? 0.0 : h.test_accuracy.back();
  });

  SweepTable table;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> grouped;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const SweepPoint point{cells[c].i};
    table.rows.push_back({models[cells[c].model].label(), point.n_samples(), cells[c].seed, results[c]});
    grouped[{cells[c].model, cells[c].i}].push_back(results[c]);
  }
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t i : i_range) {
      const auto& acc = grouped[{m, i}];
      SweepAggregate agg;
      agg.model = models[m].label();
      agg.n_samples = SweepPoint{i}.n_samples();
      agg.runs = acc.size();
      agg.mean = std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
      double ss = 0.0;
      for (double a : acc) ss += (a - agg.mean) * (a - agg.mean);
      agg.stddev = acc.size() > 1 ? std::sqrt(ss / static_cast<double>(acc.size() - 1)) : 0.0;
      agg.best = *std::max_element(acc.begin(), acc.end());
      table.aggregates.push_back(agg);
    }
  }
  return table;
}

std::string sweep_rows_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "model,n_samples,seed,test_acc\n";
  for (const auto& r : table.rows) {
    out << r.model << ',' << r.n_samples << ',' << r.seed << ',' << fmt(r.test_accuracy) << '\n';
  }
  return out.str();
}

std::string sweep_aggregate_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "model,n_samples,runs,mean_test_acc,std_test_acc,best_test_acc\n";
  for (const auto& a : table.aggregates) {
    out << a.model << ',' << a.n_samples << ',' << a.runs << ',' << fmt(a.mean) << ','
        << fmt(a.stddev) << ',' << fmt(a.best) << '\n';
  }
  return out.str();
}

std::string history_csv(const RunHistory& history) {
  std::ostringstream out;
  out << "epoch,train_loss,train_acc,test_acc\n";
  for (std::size_t e = 0; e < history.train_loss.size(); ++e) {
    out << e + 1 << ',' << fmt(history.train_loss[e]) << ',' << fmt(history.train_accuracy[e])
        << ',' << fmt(history.test_accuracy[e]) << '\n';
  }
  return out.str();
}

}  // namespace eqcnn
