#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ucfem/config.hpp"
#include "ucfem/metrics.hpp"

namespace ucfem {

/// Raised when a built-in verification gate fails before an experiment runs.
class GateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputFile {
  std::string name;
  std::string content;
};

/// Everything an experiment produces. Tables and series are keyed by short
/// labels such as "p2_theta1"; files hold the serialized CSVs and the plot script.
struct ExperimentOutput {
  std::string experiment;
  std::map<std::string, ConvergenceTable> tables;
  std::map<std::string, std::vector<double>> series;
  std::map<std::string, double> scalars;
  std::vector<OutputFile> files;
};

struct RunOptions {
  int threads = 1;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"sweep", "convergence", "pollution", "split",
                                              "jump",  "inclusion",   "condition"};
  return names;
}

ExperimentOutput run_sweep(const Config& config, const RunOptions& run = {});
ExperimentOutput run_convergence(const Config& config, const RunOptions& run = {});
ExperimentOutput run_pollution(const Config& config, const RunOptions& run = {});
ExperimentOutput run_split(const Config& config, const RunOptions& run = {});
ExperimentOutput run_jump(const Config& config, const RunOptions& run = {});
ExperimentOutput run_inclusion(const Config& config, const RunOptions& run = {});
ExperimentOutput run_condition(const Config& config, const RunOptions& run = {});

/// Dispatches on the experiment name; throws ConfigError for unknown names.
ExperimentOutput run_experiment(const std::string& name, const Config& config, const RunOptions& run = {});

/// Writes all output files into `dir` (created if missing).
void write_output(const ExperimentOutput& output, const std::filesystem::path& dir);

}  // namespace ucfem
