#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fhlab/errors.hpp"
#include "fhlab/io.hpp"
#include "fhlab/potential.hpp"

namespace fhlab {

class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct ExperimentConfig {
  std::string experiment;
  json raw;  // validated input, echoed into results.json
  PotentialSpec potential;
  std::vector<int> n_list;
  long samples = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double kappa = 0.05;
  double alpha = 0.05;
};

const std::vector<std::string>& experiment_names();

// Rejects unknown experiments and unknown keys.
ExperimentConfig parse_config(const json& j);

// Parsers shared with the Python bindings.
PotentialSpec parse_potential(const json& j);
TestFn parse_test_fn(const json& j);
Droplet parse_droplet(const json& j);

// Runs the experiment, writes results.json and CSV files into out_dir and
// returns the summary.
json run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Exit codes: 0 success, 2 config or phase errors, 3 numeric failures,
// 4 hypothesis violations, 1 anything else.
int exit_code_for_current_exception();

int cli_main(int argc, char** argv);

}  // namespace fhlab
