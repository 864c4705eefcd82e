// levylab: config-driven experiment runner.
//
//   levylab --config run.json --out results/ [--seed N] [--threads N]
//   levylab --list-examples
//   levylab --export-examples dir/

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "levylab/catalog.hpp"
#include "levylab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Levy generator, subordination and unique-continuation experiments"};
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool list = false;
  std::string export_dir;
  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_option("--out", out_dir, "output directory for report.json and CSV files");
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--list-examples", list, "print the bundled example configs");
  app.add_option("--export-examples", export_dir, "write the bundled configs as <name>.json into a directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : levylab::kExitValidation;
  }

  if (list) {
    for (const auto& e : levylab::example_catalog())
      std::cout << e.name << "\t" << e.description << "\n  " << e.config.dump() << "\n";
    return 0;
  }
  if (!export_dir.empty()) {
    std::filesystem::create_directories(export_dir);
    for (const auto& e : levylab::example_catalog()) {
      std::ofstream os(std::filesystem::path(export_dir) / (e.name + ".json"));
      os << e.config.dump(2) << '\n';
    }
    return 0;
  }
  if (config_path.empty()) {
    std::cerr << "levylab: --config is required (see --help)\n";
    return levylab::kExitValidation;
  }

  levylab::RunOptions opt;
  opt.seed = seed;
  opt.threads = threads;
  const levylab::RunOutcome r = levylab::run_config_file(config_path, out_dir, opt);
  if (r.exit_code != levylab::kExitOk) {
    std::cerr << "levylab: " << (r.exit_code == levylab::kExitValidation ? "validation error: " : "numerical error: ")
              << r.message << "\n";
  } else {
    std::cout << "levylab: " << r.report.value("subcommand", "") << " ok, report in "
              << (std::filesystem::path(out_dir) / "report.json").string() << "\n";
  }
  return r.exit_code;
}
