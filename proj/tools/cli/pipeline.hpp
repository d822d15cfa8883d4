#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace fraclab::cli {

enum ExitCode { exit_ok = 0, exit_check_failed = 1, exit_schema = 2, exit_nonconvergence = 3,
                exit_io = 4 };

struct CheckRow {
  std::string check, metric;
  std::string relation;  // "<=", ">=", "<", "flag" or "info"
  double threshold = 0.0;
  double observed = 0.0;
  std::string status;    // pass | fail | n/a | info
  std::string note;
};

struct Artifact {
  std::string name;
  std::string contents;
};

struct RunResult {
  int exit_code = exit_ok;
  std::string out_dir;
  std::vector<CheckRow> rows;
  std::vector<Artifact> files;  // everything written except the manifest
};

// FRACLAB_THREADS is the fallback when no explicit count is given; default 1.
int resolve_threads(std::optional<int> requested);

RunResult run_experiment(const ExperimentConfig& config, const std::string& out_dir, int threads,
                         std::ostream& log);

int run_command(const std::string& config_path, const std::optional<std::string>& out,
                std::optional<int> threads, std::ostream& out_stream, std::ostream& err);
int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err);
int report_command(const std::vector<std::string>& dirs, std::ostream& out, std::ostream& err);

std::string summary_csv(const std::vector<CheckRow>& rows);

}  // namespace fraclab::cli
