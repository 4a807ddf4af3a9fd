#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eqcnn/cli/config.hpp"

namespace eqcnn::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitAuditFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

/// Training and test data for a train or sweep run. Ising data is read from
/// `config.data` when set and generated in memory otherwise; `min_train` is
/// the number of training samples the run needs.
DatasetSplit load_dataset(const ExperimentConfig& config, std::size_t min_train,
                          std::ostream& log);

int cmd_gen_ising(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_train(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

struct AuditArgs {
  Architecture arch = Architecture::equiv;
  std::size_t n = 4;
  bool freeze_bridge = false;
  std::uint64_t seed = 0;
  std::size_t draws = 20;
  std::size_t images = 20;
  double tolerance = 1e-10;
};
int cmd_audit(const AuditArgs& args, std::ostream& out);

struct TwirlArgs {
  std::string word;              // empty when listing a gateset
  std::string group = "x-flip";
  std::size_t n = 2;
  std::vector<std::size_t> gateset_support;
  std::size_t max_weight = 4;
  bool mirrored = false;
};
int cmd_twirl(const TwirlArgs& args, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eqcnn::cli
