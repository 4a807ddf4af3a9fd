#include "eqcnn/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace eqcnn::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> parts;
  if (trim(s).empty()) return parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    parts.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

[[noreturn]] void bad_value(std::string_view key, const RawValue& raw, std::string_view expected) {
  throw ConfigError(raw.origin + ": invalid value '" + raw.value + "' for key '" + std::string(key) +
                    "' (expected " + std::string(expected) + ")");
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  const RawValue* find(std::string_view key) const {
    const auto it = raw_.find(key);
    return it == raw_.end() ? nullptr : &it->second;
  }

  template <typename T>
  void number(std::string_view key, T& out) const {
    if (const auto* v = find(key)) {
      if (!parse_number(v->value, out)) bad_value(key, *v, "a number");
    }
  }

  void text(std::string_view key, std::string& out) const {
    if (const auto* v = find(key)) out = std::string(trim(v->value));
  }

  void flag(std::string_view key, bool& out) const {
    if (const auto* v = find(key)) {
      const auto t = trim(v->value);
      if (t == "true" || t == "1" || t == "yes") {
        out = true;
      } else if (t == "false" || t == "0" || t == "no") {
        out = false;
      } else {
        bad_value(key, *v, "true or false");
      }
    }
  }

  template <typename T>
  void list(std::string_view key, std::vector<T>& out) const {
    if (const auto* v = find(key)) {
      out.clear();
      for (auto part : split_list(v->value)) {
        T value{};
        if (!parse_number(part, value)) bad_value(key, *v, "a comma-separated list of numbers");
        out.push_back(value);
      }
    }
  }

  template <typename Fn>
  void custom(std::string_view key, Fn&& fn) const {
    if (const auto* v = find(key)) {
      try {
        fn(std::string_view(trim(v->value)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(v->origin + ": " + e.what());
      }
    }
  }

 private:
  const RawConfig& raw_;
};

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out << ',';
    if constexpr (std::is_floating_point_v<T>) {
      out << fmt(values[k]);
    } else {
      out << values[k];
    }
  }
  return out.str();
}

const std::vector<ModelConfig>& default_models() {
  static const std::vector<ModelConfig> models = {
      {Architecture::equiv, HeadMode::M1},
      {Architecture::appr_equiv, HeadMode::M1},
      {Architecture::appr_equiv, HeadMode::M2},
      {Architecture::nonequiv, HeadMode::M1},
  };
  return models;
}

HeadMode parse_head(std::string_view name) {
  if (name == "M1") return HeadMode::M1;
  if (name == "M2") return HeadMode::M2;
  throw std::invalid_argument("unknown head mode '" + std::string(name) + "' (expected M1 or M2)");
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "arch",      "head",       "dataset",     "n",
      "data",      "mnist-dir",  "data-seed",   "n-per-class",
      "n-test-per-class",        "sweeps",      "coupling",
      "temps-ordered",           "temps-disordered",
      "lr",        "beta1",      "beta2",       "eps",
      "init-low",  "init-high",  "epochs",      "ns",
      "batch",     "seed",       "workers",     "i-min",
      "i-max",     "seeds",      "models",      "allow-nonequiv-m2",
      "out",
  };
  return keys;
}

RawConfig parse_config_text(std::string_view text, std::string_view source) {
  RawConfig config;
  const auto& keys = config_keys();
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto line = trim(text.substr(start, end == std::string_view::npos ? text.npos : end - start));
    ++line_no;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (line.empty() || line.front() == '#') continue;

    const std::string origin = std::string(source) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(origin + ": unknown key '" + std::string(key) + "'");
    }
    config[std::string(key)] = RawValue{std::string(trim(line.substr(eq + 1))), origin};
  }
  return config;
}

RawConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::filesystem::filesystem_error("cannot open config file", path,
                                            std::make_error_code(std::errc::no_such_file_or_directory));
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string());
}

void merge_into(RawConfig& base, const RawConfig& overrides) {
  for (const auto& [key, value] : overrides) base[key] = value;
}

IsingConfig ExperimentConfig::ising_base() const {
  IsingConfig config;
  config.lattice_size = std::size_t{1} << model.n;
  config.coupling = coupling;
  config.sweeps = sweeps;
  return config;
}

ModelConfig parse_model_label(std::string_view label) {
  const auto slash = label.find('/');
  if (slash == std::string_view::npos) {
    throw std::invalid_argument("model '" + std::string(label) + "' must look like arch/head");
  }
  ModelConfig model;
  model.arch = parse_architecture(label.substr(0, slash));
  model.head = parse_head(label.substr(slash + 1));
  return model;
}

ExperimentConfig resolve_config(const RawConfig& raw) {
  ExperimentConfig c;
  c.train.workers = 0;
  const Reader r(raw);
  r.custom("arch", [&](std::string_view v) { c.model.arch = parse_architecture(v); });
  r.custom("head", [&](std::string_view v) { c.model.head = parse_head(v); });
  r.custom("dataset", [&](std::string_view v) {
    if (v == "ising") {
      c.dataset = DatasetKind::ising;
    } else if (v == "mnist") {
      c.dataset = DatasetKind::mnist;
    } else {
      throw std::invalid_argument("unknown dataset '" + std::string(v) + "' (expected ising or mnist)");
    }
  });
  r.number("n", c.model.n);
  r.text("data", c.data);
  r.text("mnist-dir", c.mnist_dir);
  r.number("data-seed", c.data_seed);
  r.number("n-per-class", c.n_per_class);
  r.number("n-test-per-class", c.n_test_per_class);
  r.number("sweeps", c.sweeps);
  r.number("coupling", c.coupling);
  r.list("temps-ordered", c.grid.ordered);
  r.list("temps-disordered", c.grid.disordered);

  r.number("lr", c.train.learning_rate);
  r.number("beta1", c.train.beta1);
  r.number("beta2", c.train.beta2);
  r.number("eps", c.train.epsilon_adam);
  r.number("init-low", c.train.init_low);
  r.number("init-high", c.train.init_high);
  r.number("epochs", c.train.epochs);
  r.number("ns", c.train.n_samples);
  r.number("batch", c.train.batch_size);
  r.number("seed", c.train.seed);
  r.number("workers", c.train.workers);

  r.number("i-min", c.i_min);
  r.number("i-max", c.i_max);
  r.list("seeds", c.seeds);
  c.models = default_models();
  r.custom("models", [&](std::string_view v) {
    c.models.clear();
    for (auto part : split_list(v)) c.models.push_back(parse_model_label(part));
    if (c.models.empty()) throw std::invalid_argument("models list is empty");
  });
  r.flag("allow-nonequiv-m2", c.allow_nonequiv_m2);
  r.text("out", c.out);

  if (c.model.n < 1 || c.model.n > 5) {
    const auto* v = r.find("n");
    throw ConfigError((v ? v->origin : std::string("n")) + ": register size n must be in 1..5");
  }
  for (auto& m : c.models) m.n = c.model.n;
  if (c.dataset == DatasetKind::mnist && c.model.n != 4) {
    throw ConfigError("the mnist dataset uses 16x16 images and needs n = 4");
  }
  return c;
}

std::string echo_config(const ExperimentConfig& c) {
  std::vector<std::string> labels;
  for (const auto& m : c.models) labels.push_back(m.label());
  const std::map<std::string_view, std::string> values = {
      {"arch", std::string(to_string(c.model.arch))},
      {"head", c.model.head == HeadMode::M1 ? "M1" : "M2"},
      {"dataset", c.dataset == DatasetKind::ising ? "ising" : "mnist"},
      {"n", std::to_string(c.model.n)},
      {"data", c.data},
      {"mnist-dir", c.mnist_dir},
      {"data-seed", std::to_string(c.data_seed)},
      {"n-per-class", std::to_string(c.n_per_class)},
      {"n-test-per-class", std::to_string(c.n_test_per_class)},
      {"sweeps", std::to_string(c.sweeps)},
      {"coupling", fmt(c.coupling)},
      {"temps-ordered", join(c.grid.ordered)},
      {"temps-disordered", join(c.grid.disordered)},
      {"lr", fmt(c.train.learning_rate)},
      {"beta1", fmt(c.train.beta1)},
      {"beta2", fmt(c.train.beta2)},
      {"eps", fmt(c.train.epsilon_adam)},
      {"init-low", fmt(c.train.init_low)},
      {"init-high", fmt(c.train.init_high)},
      {"epochs", std::to_string(c.train.epochs)},
      {"ns", std::to_string(c.train.n_samples)},
      {"batch", std::to_string(c.train.batch_size)},
      {"seed", std::to_string(c.train.seed)},
      {"workers", std::to_string(c.train.workers)},
      {"i-min", std::to_string(c.i_min)},
      {"i-max", std::to_string(c.i_max)},
      {"seeds", join(c.seeds)},
      {"models", join(labels)},
      {"allow-nonequiv-m2", c.allow_nonequiv_m2 ? "true" : "false"},
      {"out", c.out},
  };
  std::ostringstream out;
  for (auto key : config_keys()) out << key << " = " << values.at(key) << '\n';
  return out.str();
}

std::string check_head_combination(const ModelConfig& model, bool allow_nonequiv_m2) {
  if (model.arch != Architecture::nonequiv || model.head != HeadMode::M2) return {};
  if (!allow_nonequiv_m2) {
    throw ConfigError(
        "head M2 is meant for the equivariant architectures; pass --allow-nonequiv-m2 to "
        "train nonequiv/M2 anyway");
  }
  return "warning: training nonequiv with head M2 (allowed by allow-nonequiv-m2)";
}

}  // namespace eqcnn::cli
