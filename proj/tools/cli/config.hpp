#pragma once

#include <map>
#include <string>
#include <vector>

#include "fraclab/nonlinearity.hpp"
#include "fraclab/solver.hpp"

namespace fraclab::cli {

// Flat sections of key = value lines; unknown sections or keys are errors.
struct ExperimentConfig {
  std::string path;
  std::string text;

  std::vector<double> s;

  std::string label;
  NonlinearitySpec H;

  double L = 0.0, Y = 0.0, grading = 3.0;
  int nx = 0, ny = 0;
  bool radial = false;
  int ambient_n = 1;
  int boundary_dim = 1;

  SolverOptions solver;
  // states | step | pn-exact | periodic | constant | layer1d
  std::string boundary = "states";
  std::vector<double> alpha, beta;
  TopBC top = TopBC::neumann;
  // tanh | boundary | constant <c> | bump <A> <w>
  std::string initial = "tanh";
  std::vector<double> initial_args;
  double direction_deg = 0.0;

  std::vector<std::string> checks;
  std::map<std::string, std::string> params;  // [checks] keys other than run

  std::string out_dir;
  bool snapshot = true;

  double number(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::string word(const std::string& key) const;
  bool has(const std::string& key) const { return params.count(key) > 0; }
};

const std::vector<std::string>& known_checks();

// Parses and validates; throws fraclab::Error naming the offending key.
ExperimentConfig parse_config(const std::string& text, const std::string& path = "<memory>");
ExperimentConfig load_config(const std::string& path);

}  // namespace fraclab::cli
