#include "curvecomp/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Optimal designs and estimators for comparing two regression curves with correlated errors"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Execute a run configuration (optimize, evaluate or simulate)");
  run->add_option("config", config_path, "Path to the JSON run configuration")->required();
  run->add_option("-o,--output-dir", output_dir, "Override output_dir from the configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : curvecomp::kExitConfig;
  }

  return curvecomp::run(config_path, std::cout, std::cerr,
                        output_dir.empty() ? std::nullopt : std::optional<std::string>(output_dir));
}
