#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "eqcnn/cli/commands.hpp"
#include "support/tempdir.hpp"

namespace eqcnn::cli {
namespace {

using testing_support::read_file;
using testing_support::TempDir;
using testing_support::write_file;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "eqcnn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Small fast training run on 4x4 Ising lattices.
std::vector<std::string> small_train(const TempDir& dir, const std::string& leaf) {
  return {"train", "--arch", "equiv", "--n", "2", "--ns", "8", "--batch", "4", "--epochs", "3",
          "--n-per-class", "4", "--n-test-per-class", "4", "--sweeps", "50", "--out",
          (dir / leaf).string()};
}

TEST(CliTwirl, EquivariantWordKeepsUnitCoefficient) {
  const auto r = run({"twirl", "Y0Y1", "--group", "x-flip", "--n", "2"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("Y0Y1 (coefficient 1)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("verdict: equivariant"), std::string::npos);
}

TEST(CliTwirl, SingleYCancels) {
  const auto r = run({"twirl", "Y0", "--group", "x-flip"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.substr(0, 2), "0\n");
  EXPECT_NE(r.out.find("not equivariant"), std::string::npos);
}

TEST(CliTwirl, MalformedWordReportsPosition) {
  const auto r = run({"twirl", "Y0Q1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("position 2"), std::string::npos) << r.err;
}

TEST(CliTwirl, WordOutsideRegisterIsUsageError) {
  EXPECT_EQ(run({"twirl", "X7", "--n", "2"}).code, kExitUsage);
}

TEST(CliTwirl, MirroredGatesetListsNineWords) {
  const auto r = run({"twirl", "--gateset", "0,1,4,5", "--n", "4", "--mirrored"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find(": 9"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1. X0X1X4X5"), std::string::npos);
  EXPECT_NE(r.out.find("9. Z0Z1Z4Z5"), std::string::npos);
}

TEST(Cli, UnknownSubcommandAndHelp) {
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(CliGenIsing, WritesFortySamplesDeterministically) {
  TempDir dir;
  const auto path = (dir / "d.eqds").string();
  const std::vector<std::string> args = {"gen-ising", "--n", "2", "--n-per-class", "20", "--seed", "0",
                                         "--sweeps", "100", "--out", path};
  const auto first = run(args);
  ASSERT_EQ(first.code, kExitOk) << first.err;
  EXPECT_NE(first.out.find("wrote 40 training samples"), std::string::npos);
  EXPECT_EQ(read_eqds(path).size(), 40u);
  const std::string bytes = read_file(path);
  const std::string sidecar = read_file(dir / "d.json");
  ASSERT_EQ(run(args).code, kExitOk);
  EXPECT_EQ(read_file(path), bytes);
  EXPECT_EQ(read_file(dir / "d.json"), sidecar);
  EXPECT_EQ(nlohmann::json::parse(sidecar).at("seed"), 0);
}

TEST(CliGenIsing, SeedAliasSelectsDataSeed) {
  TempDir dir;
  auto args = [&](const std::string& flag, const std::string& leaf) {
    return std::vector<std::string>{"gen-ising", "--n", "2", "--n-per-class", "2", "--sweeps", "10",
                                    flag, "5", "--out", (dir / leaf).string()};
  };
  ASSERT_EQ(run(args("--seed", "a.eqds")).code, kExitOk);
  ASSERT_EQ(run(args("--data-seed", "b.eqds")).code, kExitOk);
  EXPECT_EQ(read_file(dir / "a.eqds"), read_file(dir / "b.eqds"));
}

TEST(CliGenIsing, CreatesMissingParentDirectories) {
  TempDir dir;
  const auto r = run({"gen-ising", "--n", "2", "--n-per-class", "1", "--sweeps", "1", "--out",
                      (dir / "a" / "b" / "d.eqds").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "b" / "d.test.eqds"));
}

TEST(CliGenIsing, BadOutputPathIsIoError) {
  TempDir dir;
  write_file(dir / "plain", "");
  const auto r = run({"gen-ising", "--n", "2", "--n-per-class", "1", "--sweeps", "1", "--out",
                      (dir / "plain" / "sub" / "d.eqds").string()});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliTrain, WritesMetricsParamsAndEcho) {
  TempDir dir;
  const auto r = run(small_train(dir, "run"));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string metrics = read_file(dir / "run/metrics.csv");
  EXPECT_EQ(metrics.substr(0, metrics.find('\n')), "epoch,train_loss,train_acc,test_acc");
  EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 4);
  const auto params = nlohmann::json::parse(read_file(dir / "run/params.json"));
  EXPECT_EQ(params.at("model"), "equiv/M1");
  EXPECT_FALSE(params.contains("phi"));
  const std::string echo = read_file(dir / "run/config.txt");
  for (const char* line : {"lr = 0.01\n", "beta1 = 0.5\n", "beta2 = 0.999\n", "arch = equiv\n"}) {
    EXPECT_NE(echo.find(line), std::string::npos) << line;
  }
}

TEST(CliTrain, EchoedConfigReproducesMetrics) {
  TempDir dir;
  ASSERT_EQ(run(small_train(dir, "first")).code, kExitOk);
  // Re-run from the echo, redirecting only the output directory.
  const auto r = run({"train", "--config", (dir / "first/config.txt").string(), "--out",
                      (dir / "second").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(read_file(dir / "second/metrics.csv"), read_file(dir / "first/metrics.csv"));
  EXPECT_EQ(read_file(dir / "second/params.json"), read_file(dir / "first/params.json"));
}

TEST(CliTrain, NonequivWithM2NeedsExplicitPermission) {
  TempDir dir;
  auto args = small_train(dir, "m2");
  args[2] = "nonequiv";
  args.insert(args.end(), {"--head", "M2"});
  const auto rejected = run(args);
  EXPECT_EQ(rejected.code, kExitUsage);
  EXPECT_NE(rejected.err.find("allow-nonequiv-m2"), std::string::npos);
  args.push_back("--allow-nonequiv-m2");
  const auto allowed = run(args);
  EXPECT_EQ(allowed.code, kExitOk) << allowed.err;
  EXPECT_NE(allowed.err.find("warning"), std::string::npos);
  EXPECT_TRUE(nlohmann::json::parse(read_file(dir / "m2/params.json")).contains("phi"));
}

TEST(CliTrain, UnknownConfigKeyNamesItsLine) {
  TempDir dir;
  write_file(dir / "bad.cfg", "# experiment\narch = equiv\n\nlearning_rate = 0.1\n");
  const auto r = run({"train", "--config", (dir / "bad.cfg").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("bad.cfg:4: unknown key 'learning_rate'"), std::string::npos) << r.err;
}

TEST(CliTrain, MalformedLineAndBadValueAreUsageErrors) {
  TempDir dir;
  write_file(dir / "a.cfg", "arch equiv\n");
  EXPECT_EQ(run({"train", "--config", (dir / "a.cfg").string()}).code, kExitUsage);
  write_file(dir / "b.cfg", "epochs = many\n");
  const auto r = run({"train", "--config", (dir / "b.cfg").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("b.cfg:1"), std::string::npos) << r.err;
  EXPECT_EQ(run({"train", "--arch", "cnn"}).code, kExitUsage);
}

TEST(CliTrain, FlagsOverrideConfigFile) {
  TempDir dir;
  write_file(dir / "c.cfg", "epochs = 9\nlr = 0.5\n");
  auto args = small_train(dir, "override");
  args.insert(args.end(), {"--config", (dir / "c.cfg").string(), "--lr", "0.02"});
  ASSERT_EQ(run(args).code, kExitOk);
  const std::string echo = read_file(dir / "override/config.txt");
  EXPECT_NE(echo.find("epochs = 3\n"), std::string::npos);
  EXPECT_NE(echo.find("lr = 0.02\n"), std::string::npos);
}

TEST(CliTrain, TrainsFromSavedDataset) {
  TempDir dir;
  ASSERT_EQ(run({"gen-ising", "--n", "2", "--n-per-class", "4", "--n-test-per-class", "4", "--sweeps",
                 "50", "--out", (dir / "d.eqds").string()})
                .code,
            kExitOk);
  auto args = small_train(dir, "from-file");
  args.insert(args.end(), {"--data", (dir / "d.eqds").string()});
  ASSERT_EQ(run(args).code, kExitOk);
  auto wrong_n = args;
  wrong_n[4] = "4";
  EXPECT_EQ(run(wrong_n).code, kExitUsage);
  auto missing = args;
  missing.back() = (dir / "absent.eqds").string();
  EXPECT_EQ(run(missing).code, kExitIo);
}

TEST(CliSweep, EmptyRangeIsUsageError) {
  const auto r = run({"sweep", "--i-min", "3", "--i-max", "2"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("empty i-range"), std::string::npos);
}

TEST(CliSweep, SmallSweepWritesRowsAndAggregates) {
  TempDir dir;
  const auto r = run({"sweep", "--n", "2", "--i-min", "1", "--i-max", "1", "--epochs", "1", "--seeds",
                      "0,1", "--models", "equiv/M1,nonequiv/M1", "--n-per-class", "10",
                      "--n-test-per-class", "4", "--sweeps", "50", "--out", (dir / "sw").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string rows = read_file(dir / "sw/sweep_rows.csv");
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 1 + 2 * 2);
  const std::string agg = read_file(dir / "sw/sweep_aggregate.csv");
  EXPECT_EQ(agg.substr(0, agg.find('\n')), "model,n_samples,runs,mean_test_acc,std_test_acc,best_test_acc");
  EXPECT_NE(agg.find("equiv/M1,20,2,"), std::string::npos);
  EXPECT_EQ(r.out, agg);
}

TEST(CliAudit, ExitCodesFollowVerdict) {
  const auto equiv = run({"audit", "--arch", "equiv", "--n", "4", "--draws", "3", "--images", "3"});
  EXPECT_EQ(equiv.code, kExitOk);
  EXPECT_NE(equiv.out.find("element  circuit_defect  prediction_defect  verdict"), std::string::npos);
  EXPECT_EQ(equiv.out.find("FAIL"), std::string::npos);
  const auto base = run({"audit", "--arch", "nonequiv", "--n", "4", "--draws", "3", "--images", "3"});
  EXPECT_EQ(base.code, kExitAuditFailed);
  EXPECT_NE(base.out.find("not equivariant"), std::string::npos);
  EXPECT_EQ(run({"audit", "--arch", "appr_equiv", "--n", "4", "--draws", "3", "--images", "3"}).code,
            kExitAuditFailed);
  EXPECT_EQ(run({"audit", "--arch", "appr_equiv", "--n", "4", "--draws", "3", "--images", "3",
                 "--freeze-bridge"})
                .code,
            kExitOk);
  EXPECT_EQ(run({"audit", "--arch", "equiv", "--n", "3"}).code, kExitUsage);
}

}  // namespace
}  // namespace eqcnn::cli
