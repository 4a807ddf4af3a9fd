#include "eqcnn/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "eqcnn/mnist.hpp"
#include "eqcnn/rng.hpp"
#include "eqcnn/symmetry.hpp"

namespace eqcnn::cli {
namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw fs::filesystem_error("cannot open for writing", path, std::make_error_code(std::errc::io_error));
  }
  out << text;
  if (!out) throw fs::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string short_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::size_t half_up(std::size_t n) { return (n + 1) / 2; }

void check_image_size(const DatasetSplit& split, std::size_t n) {
  const std::size_t side = std::size_t{1} << n;
  for (const auto* set : {&split.train, &split.test}) {
    if (!set->empty() && set->front().image.size != side) {
      throw ConfigError("dataset images are " + std::to_string(set->front().image.size) + "x" +
                        std::to_string(set->front().image.size) + " but n = " + std::to_string(n) +
                        " needs " + std::to_string(side) + "x" + std::to_string(side));
    }
  }
}

std::vector<double> random_params(std::size_t count, std::uint64_t seed,
                                  std::span<const std::size_t> frozen) {
  Rng rng(seed);
  std::vector<double> params(count);
  for (auto& p : params) p = rng.uniform(-std::numbers::pi, std::numbers::pi);
  for (std::size_t k : frozen) params.at(k) = 0.0;
  return params;
}

Image random_image(std::size_t side, std::uint64_t seed) {
  Rng rng(seed);
  Image image(side);
  for (auto& px : image.pixels) px = static_cast<float>(rng.uniform(0.05, 1.0));
  return image;
}

}  // namespace

DatasetSplit load_dataset(const ExperimentConfig& config, std::size_t min_train, std::ostream& log) {
  DatasetSplit split;
  if (config.dataset == DatasetKind::mnist) {
    if (config.mnist_dir.empty()) throw ConfigError("dataset = mnist needs mnist-dir");
    const auto files = MnistFiles::in(config.mnist_dir);
    if (!files.exist()) {
      throw fs::filesystem_error("MNIST IDX files not found (expected train-/t10k- images and labels)",
                                 fs::path(config.mnist_dir),
                                 std::make_error_code(std::errc::no_such_file_or_directory));
    }
    split = mnist_dataset(files, config.data_seed);
  } else if (!config.data.empty()) {
    split = load_split(config.data);
  } else {
    const std::size_t per_class = config.n_per_class ? config.n_per_class : half_up(min_train);
    log << "generating Ising data: " << per_class << " training and " << config.n_test_per_class
        << " test samples per class (data seed " << config.data_seed << ")\n";
    split = ising_dataset(per_class, config.n_test_per_class, config.grid, config.data_seed,
                          config.ising_base(), config.train.workers);
  }
  check_image_size(split, config.model.n);
  if (split.train.size() < min_train) {
    throw ConfigError("insufficient data: need " + std::to_string(min_train) +
                      " training samples, have " + std::to_string(split.train.size()));
  }
  if (split.test.empty()) throw ConfigError("dataset has no test samples");
  return split;
}

int cmd_gen_ising(const ExperimentConfig& config, std::ostream& out, std::ostream&) {
  fs::path path = config.out;
  if (fs::is_directory(path)) path /= "ising.eqds";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const std::size_t per_class = config.n_per_class ? config.n_per_class : 20;
  const DatasetSplit split = ising_dataset(per_class, config.n_test_per_class, config.grid,
                                           config.data_seed, config.ising_base(), config.train.workers);
  save_split(path, split);
  out << "wrote " << split.train.size() << " training samples to " << path.string() << ", "
      << split.test.size() << " test samples to " << split_test_path(path).string()
      << ", metadata to " << split_sidecar_path(path).string() << '\n';
  return kExitOk;
}

int cmd_train(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  if (const auto warning = check_head_combination(config.model, config.allow_nonequiv_m2); !warning.empty()) {
    err << warning << '\n';
  }
  config.train.validate();
  const DatasetSplit data = load_dataset(config, config.train.n_samples, err);
  const RunHistory history = train(config.model, data, config.train);

  const fs::path dir = config.out;
  fs::create_directories(dir);
  write_text(dir / "metrics.csv", history_csv(history));

  const Model model(config.model);
  const std::size_t circuit_params = model.circuit().num_params;
  nlohmann::ordered_json params;
  params["model"] = config.model.label();
  params["n"] = config.model.n;
  params["seed"] = config.train.seed;
  params["circuit_params"] = std::vector<double>(history.final_params.begin(),
                                                 history.final_params.begin() + static_cast<std::ptrdiff_t>(circuit_params));
  if (config.model.head == HeadMode::M2) params["phi"] = history.final_params.back();
  params["initial_params"] = history.initial_params;
  params["final_train_loss"] = history.train_loss.back();
  params["final_test_acc"] = history.test_accuracy.back();
  write_text(dir / "params.json", params.dump(2) + "\n");
  write_text(dir / "config.txt", echo_config(config));

  out << config.model.label() << ": " << config.train.epochs << " epochs on N_s = "
      << config.train.n_samples << ", final train loss " << short_number(history.train_loss.back())
      << ", test accuracy " << short_number(history.test_accuracy.back()) << '\n';
  out << "wrote " << (dir / "metrics.csv").string() << ", " << (dir / "params.json").string() << ", "
      << (dir / "config.txt").string() << '\n';
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  if (config.i_min > config.i_max) {
    throw ConfigError("empty i-range: i-min = " + std::to_string(config.i_min) +
                      " exceeds i-max = " + std::to_string(config.i_max));
  }
  if (config.i_min < 1 || config.i_max > 20) throw ConfigError("i-range must lie within 1..20");
  if (config.seeds.empty()) throw ConfigError("seeds list is empty");
  for (const auto& m : config.models) {
    if (const auto warning = check_head_combination(m, config.allow_nonequiv_m2); !warning.empty()) {
      err << warning << '\n';
    }
  }
  std::vector<std::size_t> range;
  for (std::size_t i = config.i_min; i <= config.i_max; ++i) range.push_back(i);
  const DatasetSplit data = load_dataset(config, SweepPoint{config.i_max}.n_samples(), err);

  SweepOptions options;
  options.seeds = config.seeds;
  options.workers = config.train.workers;
  const SweepTable table = sweep(config.models, data, range, config.train, options);

  const fs::path dir = config.out;
  fs::create_directories(dir);
  write_text(dir / "sweep_rows.csv", sweep_rows_csv(table));
  write_text(dir / "sweep_aggregate.csv", sweep_aggregate_csv(table));
  write_text(dir / "config.txt", echo_config(config));
  out << sweep_aggregate_csv(table);
  return kExitOk;
}

int cmd_audit(const AuditArgs& args, std::ostream& out) {
  const CircuitSpec circuit = build_qcnn(args.arch, args.n);
  AuditOptions options;
  options.parameter_draws = args.draws;
  options.seed = args.seed;
  options.tolerance = args.tolerance;
  if (args.freeze_bridge) options.frozen_params = circuit.bridge_params;
  const AuditReport report = audit_circuit(circuit, args.n, options);

  // Prediction invariance of the M1 readout under pixel-space transforms.
  const MeasurementHead head = make_head(circuit, HeadMode::M1);
  const std::size_t side = std::size_t{1} << args.n;
  std::array<double, 8> prediction_defect{};
  for (std::size_t k = 0; k < args.images; ++k) {
    const auto params = random_params(circuit.num_params, mix_seed(args.seed, 2 * k), options.frozen_params);
    const Image image = random_image(side, mix_seed(args.seed, 2 * k + 1));
    const auto base = predict(circuit, params, head, image);
    for (std::size_t g = 0; g < kAllElements.size(); ++g) {
      const auto moved = predict(circuit, params, head, apply_group_to_image(image, kAllElements[g]));
      for (std::size_t c = 0; c < base.size(); ++c) {
        prediction_defect[g] = std::max(prediction_defect[g], std::abs(moved[c] - base[c]));
      }
    }
  }

  out << "architecture " << to_string(args.arch) << ", n = " << args.n << ", "
      << circuit.num_qubits << " qubits, " << circuit.num_params << " parameters";
  if (args.freeze_bridge) out << ", " << circuit.bridge_params.size() << " bridge parameters frozen at 0";
  out << "\n\n";
  out << "element  circuit_defect  prediction_defect  verdict\n";
  bool all_pass = true;
  for (std::size_t g = 0; g < kAllElements.size(); ++g) {
    const bool pass = report.defect[g] < args.tolerance && prediction_defect[g] < args.tolerance;
    all_pass = all_pass && pass;
    char line[96];
    std::snprintf(line, sizeof line, "%-7s  %-14s  %-17s  %s\n",
                  std::string(to_string(kAllElements[g])).c_str(), sci(report.defect[g]).c_str(),
                  sci(prediction_defect[g]).c_str(), pass ? "pass" : "FAIL");
    out << line;
  }
  out << "\n" << (all_pass ? "equivariant" : "not equivariant") << " (tolerance " << sci(args.tolerance)
      << ")\n";
  return all_pass ? kExitOk : kExitAuditFailed;
}

int cmd_twirl(const TwirlArgs& args, std::ostream& out) {
  if (!args.gateset_support.empty()) {
    const auto words = enumerate_equivariant_gateset(
        args.gateset_support, args.n, args.max_weight,
        args.mirrored ? WordForm::mirrored_pairs : WordForm::any);
    out << "equivariant words on qubits {";
    for (std::size_t k = 0; k < args.gateset_support.size(); ++k) {
      out << (k ? "," : "") << args.gateset_support[k];
    }
    out << "} (n = " << args.n << ", max weight " << args.max_weight
        << (args.mirrored ? ", mirrored pairs" : "") << "): " << words.size() << '\n';
    for (std::size_t k = 0; k < words.size(); ++k) out << "  " << k + 1 << ". " << words[k].to_string() << '\n';
    return kExitOk;
  }
  if (args.word.empty()) throw ConfigError("twirl needs a Pauli word or --gateset");

  const auto word = SignedPauliString::parse(args.word);
  if (!word.is_identity() && word.factors().rbegin()->first >= 2 * args.n) {
    throw ConfigError("word acts on qubit " + std::to_string(word.factors().rbegin()->first) +
                      " but n = " + std::to_string(args.n) + " has qubits 0.." +
                      std::to_string(2 * args.n - 1));
  }
  const auto reps = subgroup_actions(args.group, args.n);
  const PauliSum result = twirl(word, reps);

  if (result.is_zero()) {
    out << "0\n";
  } else {
    for (const auto& [term, c] : result.terms()) {
      out << term.to_string() << " (coefficient " << short_number(c) << ")\n";
    }
  }
  const bool invariant = result == PauliSum(word);
  out << "verdict: " << (invariant ? "equivariant" : "not equivariant") << " under " << args.group
      << " (" << reps.size() << " elements, n = " << args.n << ")\n";
  return kExitOk;
}

namespace {

const std::map<std::string_view, std::string_view>& config_help() {
  static const std::map<std::string_view, std::string_view> help = {
      {"arch", "equiv, appr_equiv or nonequiv"},
      {"head", "M1 or M2"},
      {"dataset", "ising or mnist"},
      {"n", "Register size; images are 2^n x 2^n"},
      {"data", "Existing EQDS training file instead of generating data"},
      {"mnist-dir", "Directory with the MNIST IDX files"},
      {"data-seed", "Seed for dataset generation"},
      {"n-per-class", "Training samples per class (0 = enough for N_s)"},
      {"n-test-per-class", "Test samples per class"},
      {"sweeps", "Metropolis sweeps per Ising sample"},
      {"coupling", "Ising coupling J"},
      {"temps-ordered", "Comma-separated temperatures below T_c"},
      {"temps-disordered", "Comma-separated temperatures above T_c"},
      {"lr", "ADAM learning rate"},
      {"beta1", "ADAM first-moment decay"},
      {"beta2", "ADAM second-moment decay"},
      {"eps", "ADAM epsilon"},
      {"init-low", "Lower bound of the uniform parameter init"},
      {"init-high", "Upper bound of the uniform parameter init"},
      {"epochs", "Training epochs"},
      {"ns", "Training set size N_s"},
      {"batch", "Minibatch size"},
      {"seed", "Run seed for init and shuffling"},
      {"workers", "Threads (0 = all cores)"},
      {"i-min", "Smallest sweep exponent, N_s = 10 * 2^i"},
      {"i-max", "Largest sweep exponent"},
      {"seeds", "Comma-separated run seeds"},
      {"models", "Comma-separated arch/head labels"},
      {"out", "Output directory (gen-ising: file or directory)"},
  };
  return help;
}

/// Registers `--<key>` for each config key on `cmd`, collecting values into `flags`.
void add_config_flags(CLI::App* cmd, std::map<std::string, std::string>& flags,
                      std::vector<std::string_view> skip = {}) {
  for (auto key : config_keys()) {
    if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
    const std::string name = "--" + std::string(key);
    if (key == "allow-nonequiv-m2") {
      cmd->add_flag(name, "Permit nonequiv with head M2 (prints a warning)");
    } else {
      const auto it = config_help().find(key);
      cmd->add_option(name, flags[std::string(key)], it == config_help().end() ? "" : std::string(it->second));
    }
  }
}

RawConfig collect(CLI::App* cmd, const std::string& config_path,
                  const std::map<std::string, std::string>& flags,
                  const std::map<std::string, std::string>& aliases = {}) {
  RawConfig raw;
  if (!config_path.empty()) raw = read_config_file(config_path);
  RawConfig overrides;
  for (auto key : config_keys()) {
    if (aliases.count(std::string(key))) continue;
    const std::string name = "--" + std::string(key);
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    if (opt == nullptr || opt->count() == 0) continue;
    if (key == "allow-nonequiv-m2") {
      overrides[std::string(key)] = {"true", name};
    } else {
      overrides[std::string(key)] = {flags.at(std::string(key)), name};
    }
  }
  for (const auto& [flag, key] : aliases) {
    const CLI::Option* opt = cmd->get_option_no_throw("--" + flag);
    if (opt != nullptr && opt->count() > 0) overrides[key] = {flags.at(flag), "--" + flag};
  }
  merge_into(raw, overrides);
  return raw;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equivariant quantum convolutional networks on a statevector simulator", "eqcnn"};
  app.require_subcommand(1);

  std::map<std::string, std::string> gen_flags, train_flags, sweep_flags;
  std::string gen_config, train_config, sweep_config;

  auto* gen = app.add_subcommand("gen-ising", "Generate a labelled Ising dataset (EQDS + JSON sidecar)");
  gen->add_option("--config", gen_config, "Config file (key = value)");
  add_config_flags(gen, gen_flags, {"seed"});
  gen->add_option("--seed", gen_flags["seed"], "Alias for --data-seed");

  auto* trn = app.add_subcommand("train", "Train one model and write metrics, parameters and config echo");
  trn->add_option("--config", train_config, "Config file (key = value)");
  add_config_flags(trn, train_flags);

  auto* swp = app.add_subcommand("sweep", "Train every (model, N_s, seed) cell and write sweep tables");
  swp->add_option("--config", sweep_config, "Config file (key = value)");
  add_config_flags(swp, sweep_flags);

  AuditArgs audit_args;
  std::string audit_arch = "equiv";
  auto* aud = app.add_subcommand("audit", "Check circuit equivariance and prediction invariance");
  aud->add_option("--arch", audit_arch, "equiv, appr_equiv or nonequiv");
  aud->add_option("--n", audit_args.n, "Register size (image side 2^n)");
  aud->add_flag("--freeze-bridge", audit_args.freeze_bridge, "Hold the bridge angles at 0");
  aud->add_option("--seed", audit_args.seed, "Seed for random parameters, states and images");
  aud->add_option("--draws", audit_args.draws, "Random parameter vectors for the circuit audit");
  aud->add_option("--images", audit_args.images, "Random images for the prediction check");
  aud->add_option("--tolerance", audit_args.tolerance, "Pass threshold for every defect");

  TwirlArgs twirl_args;
  auto* twl = app.add_subcommand("twirl", "Twirl a Pauli word over a subgroup or list an equivariant gateset");
  twl->add_option("word", twirl_args.word, "Pauli word such as Y0Y1 or -Z0Z2");
  twl->add_option("--group", twirl_args.group, "x-flip, y-flip, xy-flip, exchange, rotation or p4m");
  twl->add_option("--n", twirl_args.n, "Register size");
  twl->add_option("--gateset", twirl_args.gateset_support, "Support qubits, e.g. 0,1,4,5")->delimiter(',');
  twl->add_option("--max-weight", twirl_args.max_weight, "Largest word weight for --gateset");
  twl->add_flag("--mirrored", twirl_args.mirrored, "Only sigma sigma sigma' sigma' words on a mirrored quad");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen_ising(resolve_config(collect(gen, gen_config, gen_flags, {{"seed", "data-seed"}})),
                           out, err);
    }
    if (trn->parsed()) return cmd_train(resolve_config(collect(trn, train_config, train_flags)), out, err);
    if (swp->parsed()) return cmd_sweep(resolve_config(collect(swp, sweep_config, sweep_flags)), out, err);
    if (aud->parsed()) {
      audit_args.arch = parse_architecture(audit_arch);
      return cmd_audit(audit_args, out);
    }
    if (twl->parsed()) return cmd_twirl(twirl_args, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DatasetFormatError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IdxFormatError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const PauliParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace eqcnn::cli
