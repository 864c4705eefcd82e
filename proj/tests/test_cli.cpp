#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levylab/catalog.hpp"
#include "levylab/experiment.hpp"

using namespace levylab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("levylab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json report_without_timestamp(const fs::path& dir) {
  json j = json::parse(slurp(dir / "report.json"));
  j.erase("timestamp");
  return j;
}

int run_cli(const std::string& args) {
  const int rc = std::system((std::string(LEVYLAB_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Cli, SymbolCsvHasTheEndpointRows) {
  const fs::path out = scratch("symbol");
  const json cfg = {{"subcommand", "symbol"},
                    {"seed", 1},
                    {"walk", {{"kind", "nearest_neighbour"}, {"dim", 1}}},
                    {"points", 16}};
  const RunOutcome r = run_experiment(cfg, out);
  ASSERT_EQ(r.exit_code, 0) << r.message;
  std::ifstream is(out / "symbol.csv");
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "xi1,psi_re,psi_im");
  bool zero = false, pi = false;
  while (std::getline(is, line)) {
    if (line == "0,0,0") zero = true;
    if (line == "3.1415926535897931,2,0") pi = true;
  }
  EXPECT_TRUE(zero);
  EXPECT_TRUE(pi);
  const json rep = json::parse(slurp(out / "report.json"));
  EXPECT_EQ(rep["status"], "ok");
  EXPECT_EQ(rep["config"], cfg);
  EXPECT_TRUE(rep["versions"].contains("eigen"));
}

TEST(Cli, NegativeLambdaIsAValidationError) {
  const fs::path out = scratch("lambda");
  const json cfg = {{"subcommand", "resolvent"},
                    {"seed", 1},
                    {"lambda", -1.0},
                    {"walk", {{"kind", "nearest_neighbour"}}},
                    {"field", {{"kind", "delta"}, {"at", {0}}, {"radius", 2}}}};
  const RunOutcome r = run_experiment(cfg, out);
  EXPECT_EQ(r.exit_code, kExitValidation);
  EXPECT_NE(r.message.find("lambda"), std::string::npos);
  EXPECT_EQ(json::parse(slurp(out / "report.json"))["status"], "validation_error");
}

TEST(Cli, ValidationFailures) {
  const fs::path out = scratch("validation");
  EXPECT_EQ(run_experiment({{"subcommand", "transmogrify"}, {"seed", 1}}, out).exit_code, kExitValidation);
  const RunOutcome noseed = run_experiment({{"subcommand", "symbol"}, {"walk", {{"kind", "nearest_neighbour"}}}}, out);
  EXPECT_EQ(noseed.exit_code, kExitValidation);
  EXPECT_NE(noseed.message.find("seed"), std::string::npos);
  EXPECT_EQ(run_experiment({{"subcommand", "symbol"}, {"seed", 1}, {"walk", {{"kind", "hexagonal"}}}}, out).exit_code,
            kExitValidation);
  EXPECT_EQ(run_experiment({{"subcommand", "symbol"}, {"seed", "one"}, {"walk", {{"kind", "nearest_neighbour"}}}}, out)
                .exit_code,
            kExitValidation);
  EXPECT_EQ(run_experiment(json::array(), out).exit_code, kExitValidation);
  EXPECT_EQ(run_experiment({{"subcommand", "ucp-nullspace"},
                            {"seed", 1},
                            {"walk", {{"kind", "nearest_neighbour"}}},
                            {"h", 1.5},
                            {"N", 1}},
                           out)
                .exit_code,
            kExitValidation);
}

TEST(Cli, NumericalFailureExitCode) {
  const fs::path out = scratch("numerical");
  // Tolerance below what the subordination series can certify.
  const json cfg = {{"subcommand", "subordinate"},
                    {"seed", 1},
                    {"bernstein", {{"kind", "stable"}, {"s", 0.5}}},
                    {"walk", {{"kind", "nearest_neighbour"}}},
                    {"tolerance", 1e-17}};
  const RunOutcome r = run_experiment(cfg, out);
  EXPECT_EQ(r.exit_code, kExitNumerical);
  EXPECT_EQ(json::parse(slurp(out / "report.json"))["status"], "numerical_error");
}

TEST(Cli, CatalogRunsAndIsReproducible) {
  const auto cat = example_catalog();
  ASSERT_FALSE(cat.empty());
  std::set<std::string> subs;
  for (const auto& e : cat) {
    subs.insert(e.config.at("subcommand"));
    const fs::path a = scratch(e.name + "_a"), b = scratch(e.name + "_b");
    const RunOutcome ra = run_experiment(e.config, a);
    ASSERT_EQ(ra.exit_code, 0) << e.name << ": " << ra.message;
    ASSERT_EQ(run_experiment(e.config, b).exit_code, 0) << e.name;
    EXPECT_EQ(report_without_timestamp(a).dump(), report_without_timestamp(b).dump()) << e.name;
    for (const auto& art : ra.report["artifacts"]) EXPECT_EQ(slurp(a / art.get<std::string>()), slurp(b / art.get<std::string>()));
  }
  EXPECT_EQ(subs.size(), subcommands().size());
}

TEST(Cli, ConfigIsNotMutated) {
  const auto e = example_catalog().front();
  const json before = e.config;
  run_experiment(e.config, scratch("immutable"), RunOptions{42, 1});
  EXPECT_EQ(e.config, before);
}

TEST(Cli, BinaryFlagsAndExitCodes) {
  const fs::path dir = scratch("binary");
  ASSERT_EQ(run_cli("--export-examples " + (dir / "cfg").string()), 0);
  ASSERT_EQ(run_cli("--list-examples"), 0);
  const fs::path cfg = dir / "cfg" / "mc-exit-nearest-neighbour.json";
  ASSERT_TRUE(fs::exists(cfg));
  EXPECT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "a").string() + " --seed 99 --threads 2"), 0);
  EXPECT_EQ(run_cli("--config " + cfg.string() + " --out " + (dir / "b").string() + " --seed 99"), 0);
  json a = report_without_timestamp(dir / "a"), b = report_without_timestamp(dir / "b");
  EXPECT_EQ(a["config"]["seed"], 99);
  EXPECT_EQ(a["results"], b["results"]);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_EQ(run_cli("--config " + (dir / "bad.json").string() + " --out " + (dir / "c").string()), 2);
  EXPECT_EQ(run_cli("--config " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("--threads 0 --config " + cfg.string()), 2);
}
