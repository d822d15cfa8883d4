#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fraclab: layered solutions of fractional systems through the extension problem"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out;
  std::optional<int> threads;
  auto* run = app.add_subcommand("run", "solve and verify one experiment config");
  run->add_option("config", config, "experiment config")->required();
  run->add_option("--out", out, "run directory (default: [output] dir, else runs/<stem>)");
  run->add_option("--threads", threads, "parallel checks (fallback: FRACLAB_THREADS)");

  std::vector<std::string> dirs;
  auto* report = app.add_subcommand("report", "summarize run directories");
  report->add_option("dirs", dirs, "run directories");

  std::string vconfig;
  auto* validate = app.add_subcommand("validate", "check a config against the schema");
  validate->add_option("config", vconfig, "experiment config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fraclab::cli::exit_schema;
  }
  namespace cli = fraclab::cli;
  if (*run) return cli::run_command(config, out, threads, std::cout, std::cerr);
  if (*report) return cli::report_command(dirs, std::cout, std::cerr);
  return cli::validate_command(vconfig, std::cout, std::cerr);
}
